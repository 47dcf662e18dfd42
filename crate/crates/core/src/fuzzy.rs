//! Two-input, one-output Mamdani inference over uniform triangular partitions.
//!
//! Antecedents combine with `min`, consequents aggregate per output label with
//! `max`, and the crisp value is the center-of-sets weighted average of the
//! output-set centers. Inputs outside a partition's universe are clamped to the
//! nearest bound before fuzzification.

use crate::error::{check_positive, Error, Result};

/// Membership function with peak 1 at `center` and feet at `center ± half_width`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularSet {
    label: String,
    center: f64,
    half_width: f64,
}

impl TriangularSet {
    pub fn new(label: impl Into<String>, center: f64, half_width: f64) -> Result<Self> {
        check_positive("half_width", half_width)?;
        if !center.is_finite() {
            return Err(Error::Parameter {
                name: "center",
                value: center,
                reason: "must be finite",
            });
        }
        Ok(Self {
            label: label.into(),
            center,
            half_width,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// `max(0, 1 - |x - center| / half_width)`.
    pub fn membership(&self, x: f64) -> f64 {
        (1.0 - (x - self.center).abs() / self.half_width).max(0.0)
    }
}

/// Ordered family of triangular sets spaced uniformly over `[lo, hi]`, each
/// overlapping its neighbours by half so memberships always sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    lo: f64,
    hi: f64,
    spacing: f64,
    sets: Vec<TriangularSet>,
}

impl Partition {
    /// Builds `labels.len()` sets with centers from `lo` to `hi` inclusive.
    pub fn uniform<S: AsRef<str>>(labels: &[S], lo: f64, hi: f64) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::Partition(format!(
                "need at least 2 labels, got {}",
                labels.len()
            )));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Partition(format!(
                "universe bounds must satisfy lo < hi (got [{lo}, {hi}])"
            )));
        }
        let n = labels.len();
        let spacing = (hi - lo) / (n - 1) as f64;
        let mut sets = Vec::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            let label = label.as_ref();
            if sets.iter().any(|s: &TriangularSet| s.label == label) {
                return Err(Error::Partition(format!("duplicate label `{label}`")));
            }
            // pin the last center to `hi` exactly instead of lo + (n-1)*spacing
            let center = if i + 1 == n {
                hi
            } else {
                lo + i as f64 * spacing
            };
            sets.push(TriangularSet::new(label, center, spacing)?);
        }
        Ok(Self {
            lo,
            hi,
            spacing,
            sets,
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn sets(&self) -> &[TriangularSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.sets.iter().map(|s| s.label.as_str())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.label == label)
    }

    pub fn center(&self, index: usize) -> f64 {
        self.sets[index].center
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Membership degree of `x` (after clamping) in every set, in set order.
    pub fn fuzzify(&self, x: f64) -> Vec<f64> {
        let x = self.clamp(x);
        self.sets.iter().map(|s| s.membership(x)).collect()
    }

    /// The (at most) two adjacent sets with nonzero membership at `x`.
    ///
    /// Returns `[(i, μ_i), (i + 1, μ_{i+1})]`; one of the degrees may be zero.
    pub fn active_pair(&self, x: f64) -> [(usize, f64); 2] {
        let x = self.clamp(x);
        let last = self.sets.len() - 2;
        let i = (((x - self.lo) / self.spacing).floor().max(0.0) as usize).min(last);
        [
            (i, self.sets[i].membership(x)),
            (i + 1, self.sets[i + 1].membership(x)),
        ]
    }
}

/// Center-of-sets defuzzification: `Σ w_i c_i / Σ w_i`. `None` when every
/// weight is zero.
pub fn center_of_sets(output: &Partition, weights: &[f64]) -> Option<f64> {
    debug_assert_eq!(weights.len(), output.len());
    let (num, den) = weights
        .iter()
        .zip(output.sets())
        .fold((0.0, 0.0), |(num, den), (&w, set)| {
            (num + w * set.center, den + w)
        });
    (den > 0.0).then(|| num / den)
}

/// Complete grid of rules: `entries[row][col]` is the consequent label for
/// (first input is `row_labels[row]`) AND (second input is `col_labels[col]`).
#[derive(Debug, Clone, PartialEq)]
pub struct RuleTable {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    entries: Vec<Vec<String>>,
}

impl RuleTable {
    pub fn new<S: AsRef<str>>(
        row_labels: &[S],
        col_labels: &[S],
        entries: Vec<Vec<String>>,
    ) -> Result<Self> {
        if entries.len() != row_labels.len() {
            return Err(Error::RuleTable(format!(
                "expected {} rows, got {}",
                row_labels.len(),
                entries.len()
            )));
        }
        for (r, row) in entries.iter().enumerate() {
            if row.len() != col_labels.len() {
                return Err(Error::RuleTable(format!(
                    "row {} (`{}`) has {} entries, expected {}",
                    r,
                    row_labels[r].as_ref(),
                    row.len(),
                    col_labels.len()
                )));
            }
        }
        Ok(Self {
            row_labels: row_labels.iter().map(|s| s.as_ref().to_owned()).collect(),
            col_labels: col_labels.iter().map(|s| s.as_ref().to_owned()).collect(),
            entries,
        })
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn consequent(&self, row: usize, col: usize) -> &str {
        &self.entries[row][col]
    }

    pub fn len(&self) -> usize {
        self.row_labels.len() * self.col_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A validated two-input fuzzy system.
#[derive(Debug, Clone)]
pub struct FisConfig {
    input1: Partition,
    input2: Partition,
    output: Partition,
    rules: RuleTable,
    output_gain: f64,
    /// Row-major consequent indices into `output`.
    consequents: Vec<usize>,
}

impl FisConfig {
    pub fn new(
        input1: Partition,
        input2: Partition,
        output: Partition,
        rules: RuleTable,
        output_gain: f64,
    ) -> Result<Self> {
        check_positive("output_gain", output_gain)?;
        if !rules
            .row_labels
            .iter()
            .map(String::as_str)
            .eq(input1.labels())
        {
            return Err(Error::RuleTable(
                "row labels do not match the first input partition".into(),
            ));
        }
        if !rules
            .col_labels
            .iter()
            .map(String::as_str)
            .eq(input2.labels())
        {
            return Err(Error::RuleTable(
                "column labels do not match the second input partition".into(),
            ));
        }
        let consequents = rules
            .entries
            .iter()
            .flatten()
            .map(|label| {
                output.index_of(label).ok_or_else(|| {
                    Error::RuleTable(format!("consequent `{label}` is not an output label"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            input1,
            input2,
            output,
            rules,
            output_gain,
            consequents,
        })
    }

    pub fn input1(&self) -> &Partition {
        &self.input1
    }

    pub fn input2(&self) -> &Partition {
        &self.input2
    }

    pub fn output(&self) -> &Partition {
        &self.output
    }

    pub fn rules(&self) -> &RuleTable {
        &self.rules
    }

    pub fn output_gain(&self) -> f64 {
        self.output_gain
    }

    pub fn with_output_gain(mut self, output_gain: f64) -> Result<Self> {
        check_positive("output_gain", output_gain)?;
        self.output_gain = output_gain;
        Ok(self)
    }

    /// Crisp output for crisp inputs `(x1, x2)`.
    ///
    /// Rules with zero firing strength contribute nothing to the aggregate,
    /// so only the two active sets of each input are visited.
    pub fn evaluate(&self, x1: f64, x2: f64) -> Result<f64> {
        let cols = self.input2.len();
        let mut aggregate = vec![0.0_f64; self.output.len()];
        for (row, mu1) in self.input1.active_pair(x1) {
            if mu1 <= 0.0 {
                continue;
            }
            for (col, mu2) in self.input2.active_pair(x2) {
                let strength = mu1.min(mu2);
                if strength <= 0.0 {
                    continue;
                }
                let out = self.consequents[row * cols + col];
                aggregate[out] = aggregate[out].max(strength);
            }
        }
        center_of_sets(&self.output, &aggregate)
            .map(|y| y * self.output_gain)
            .ok_or(Error::NoRuleFired { x1, x2 })
    }
}
