//! Online sliding-surface slope scaling.
//!
//! The error history yields the incremental error `de(k) = e(k) - e(k-1)`,
//! its change `dde(k) = de(k) - de(k-1)` and the normalized acceleration
//! `r_v(k) = dde(k) / de(·)`, where `de(·)` is whichever of `de(k)`, `de(k-1)`
//! has the larger magnitude. A fuzzy system over `(|e|, r_v)` then produces
//! the coefficient factor `k_c` that multiplies the predetermined slope.

use crate::error::{check_positive, Error, Result};
use crate::fuzzy::{FisConfig, Partition, RuleTable};

/// Linguistic terms shared by both inputs and the output of the `k_c` system.
pub const KC_LABELS: [&str; 9] = ["VVS", "VS", "S", "MS", "M", "ML", "L", "VL", "VVL"];

/// `k_c` consequents. Rows: normalized error magnitude; columns: `r_v`.
pub const KC_RULES: [[&str; 9]; 9] = [
    ["VVL", "S", "VS", "VS", "VS", "VS", "VS", "VVS", "VVS"],
    ["VL", "S", "VS", "VS", "VS", "VS", "VS", "VS", "VVS"],
    ["L", "MS", "VS", "VS", "VS", "VS", "VS", "VS", "VS"],
    ["L", "MS", "S", "VS", "VS", "VS", "VS", "VS", "VS"],
    ["L", "MS", "S", "S", "VS", "VS", "VS", "VS", "VS"],
    ["L", "M", "S", "S", "S", "S", "S", "S", "S"],
    ["VL", "M", "S", "S", "S", "S", "S", "S", "S"],
    ["VL", "M", "MS", "S", "S", "S", "S", "S", "S"],
    ["VVL", "ML", "M", "MS", "MS", "MS", "MS", "MS", "MS"],
];

pub const ERROR_UNIVERSE: (f64, f64) = (0.0, 1.0);
pub const RATE_UNIVERSE: (f64, f64) = (-1.0, 1.0);
pub const KC_UNIVERSE: (f64, f64) = (0.2, 1.8);

pub fn kc_rule_table() -> RuleTable {
    let entries = KC_RULES
        .iter()
        .map(|row| row.iter().map(|s| s.to_string()).collect())
        .collect();
    RuleTable::new(&KC_LABELS, &KC_LABELS, entries).expect("9x9 table is complete")
}

/// The `k_c` fuzzy system with its default universes and the given output gain.
pub fn default_kc_fis(output_gain: f64) -> Result<FisConfig> {
    FisConfig::new(
        Partition::uniform(&KC_LABELS, ERROR_UNIVERSE.0, ERROR_UNIVERSE.1)?,
        Partition::uniform(&KC_LABELS, RATE_UNIVERSE.0, RATE_UNIVERSE.1)?,
        Partition::uniform(&KC_LABELS, KC_UNIVERSE.0, KC_UNIVERSE.1)?,
        kc_rule_table(),
        output_gain,
    )
}

/// First and second error differences produced by one [`ErrorHistory::push`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorIncrement {
    pub de: f64,
    pub de_prev: f64,
    pub dde: f64,
    /// `false` until three samples have been pushed; `de`, `de_prev` and
    /// `dde` are zero while warming up.
    pub warm: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ErrorHistory {
    e_prev: f64,
    de_prev: f64,
    samples_seen: usize,
}

impl ErrorHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn samples_seen(&self) -> usize {
        self.samples_seen
    }

    pub fn push(&mut self, e: f64) -> ErrorIncrement {
        self.samples_seen = self.samples_seen.saturating_add(1);
        let de = if self.samples_seen >= 2 {
            e - self.e_prev
        } else {
            0.0
        };
        let out = if self.samples_seen >= 3 {
            ErrorIncrement {
                de,
                de_prev: self.de_prev,
                dde: de - self.de_prev,
                warm: true,
            }
        } else {
            ErrorIncrement {
                de: 0.0,
                de_prev: 0.0,
                dde: 0.0,
                warm: false,
            }
        };
        self.e_prev = e;
        self.de_prev = de;
        out
    }
}

/// `dde(k) / de(·)` clamped to `[-1, 1]`; zero when `de(·) = 0`.
pub fn normalized_acceleration(de: f64, de_prev: f64) -> f64 {
    let reference = if de.abs() >= de_prev.abs() {
        de
    } else {
        de_prev
    };
    if reference == 0.0 {
        return 0.0;
    }
    ((de - de_prev) / reference).clamp(-1.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseSpeed {
    Fast,
    Medium,
    Slow,
}

impl ResponseSpeed {
    pub fn from_rate(r_v: f64) -> Self {
        if r_v > 0.0 {
            Self::Fast
        } else if r_v < 0.0 {
            Self::Slow
        } else {
            Self::Medium
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdaptationConfig {
    fis: FisConfig,
    e_norm_scale: f64,
    kc_min: f64,
    kc_max: f64,
}

impl AdaptationConfig {
    pub fn new(fis: FisConfig, e_norm_scale: f64, kc_min: f64, kc_max: f64) -> Result<Self> {
        check_positive("e_norm_scale", e_norm_scale)?;
        check_positive("kc_min", kc_min)?;
        if kc_min > 1.0 {
            return Err(Error::Parameter {
                name: "kc_min",
                value: kc_min,
                reason: "must not exceed 1",
            });
        }
        if !(kc_max >= 1.0 && kc_max.is_finite()) {
            return Err(Error::Parameter {
                name: "kc_max",
                value: kc_max,
                reason: "must be finite and at least 1",
            });
        }
        Ok(Self {
            fis,
            e_norm_scale,
            kc_min,
            kc_max,
        })
    }

    /// Default `k_c` system normalizing `|e|` by `|reference|`.
    pub fn for_reference(reference: f64) -> Result<Self> {
        Self::new(
            default_kc_fis(1.0)?,
            reference.abs(),
            KC_UNIVERSE.0,
            KC_UNIVERSE.1,
        )
    }

    pub fn fis(&self) -> &FisConfig {
        &self.fis
    }

    pub fn e_norm_scale(&self) -> f64 {
        self.e_norm_scale
    }

    pub fn kc_min(&self) -> f64 {
        self.kc_min
    }

    pub fn kc_max(&self) -> f64 {
        self.kc_max
    }

    /// `k_c = g(|e| / e_norm_scale, r_v)`, bounded to `[kc_min, kc_max]`.
    pub fn coefficient_factor(&self, e: f64, r_v: f64) -> Result<f64> {
        let e_norm = (e.abs() / self.e_norm_scale).clamp(0.0, 1.0);
        let kc = self.fis.evaluate(e_norm, r_v)?;
        Ok(kc.clamp(self.kc_min, self.kc_max))
    }
}

/// Output of one adaptation update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeUpdate {
    pub k_c: f64,
    pub r_v: f64,
    pub warm: bool,
}

/// Error history plus `k_c` system, one per control loop.
#[derive(Debug, Clone)]
pub struct SlopeAdapter {
    config: AdaptationConfig,
    history: ErrorHistory,
}

impl SlopeAdapter {
    pub fn new(config: AdaptationConfig) -> Self {
        Self {
            config,
            history: ErrorHistory::new(),
        }
    }

    pub fn config(&self) -> &AdaptationConfig {
        &self.config
    }

    /// `k_c` stays at 1 (slope unchanged) until three samples are available.
    pub fn update(&mut self, e: f64) -> Result<SlopeUpdate> {
        let inc = self.history.push(e);
        if !inc.warm {
            return Ok(SlopeUpdate {
                k_c: 1.0,
                r_v: 0.0,
                warm: false,
            });
        }
        let r_v = normalized_acceleration(inc.de, inc.de_prev);
        Ok(SlopeUpdate {
            k_c: self.config.coefficient_factor(e, r_v)?,
            r_v,
            warm: true,
        })
    }
}
