use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const TRACE_HEADER: [&str; 11] = [
    "t", "vC", "iL", "e", "edot", "S", "u", "k_c", "r_v", "vin", "R",
];

/// One control period of a closed-loop run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceRecord {
    pub t: f64,
    pub v_c: f64,
    pub i_l: f64,
    pub e: f64,
    pub edot: f64,
    pub s: f64,
    pub u: f64,
    pub k_c: f64,
    pub r_v: f64,
    pub vin: f64,
    pub load: f64,
}

impl TraceRecord {
    fn fields(&self) -> [f64; 11] {
        [
            self.t, self.v_c, self.i_l, self.e, self.edot, self.s, self.u, self.k_c, self.r_v,
            self.vin, self.load,
        ]
    }

    fn from_fields(f: [f64; 11]) -> Self {
        Self {
            t: f[0],
            v_c: f[1],
            i_l: f[2],
            e: f[3],
            edot: f[4],
            s: f[5],
            u: f[6],
            k_c: f[7],
            r_v: f[8],
            vin: f[9],
            load: f[10],
        }
    }
}

/// Uniformly sampled record of a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            records: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn column(&self, f: impl Fn(&TraceRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.column(|r| r.t)
    }

    pub fn output(&self) -> Vec<f64> {
        self.column(|r| r.v_c)
    }

    pub fn control(&self) -> Vec<f64> {
        self.column(|r| r.u)
    }

    /// Reference recovered from the first record (`vC + e`).
    pub fn reference(&self) -> Option<f64> {
        self.records.first().map(|r| r.v_c + r.e)
    }

    /// Time of the first change of `vin` or `R` after the first sample.
    pub fn first_disturbance(&self) -> Option<f64> {
        self.records
            .windows(2)
            .find(|w| w[0].vin != w[1].vin || w[0].load != w[1].load)
            .map(|w| w[1].t)
    }

    /// Writes the CSV form: fixed header, one row per record, every value in
    /// scientific notation with 9 significant digits.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let io_err = |source| Error::Io {
            path: path.to_owned(),
            source,
        };
        let file = File::create(path).map_err(io_err)?;
        let mut out = BufWriter::new(file);
        self.write_csv_to(&mut out).map_err(io_err)?;
        out.flush().map_err(io_err)
    }

    pub fn write_csv_to<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRACE_HEADER)?;
        let mut row: Vec<String> = Vec::with_capacity(TRACE_HEADER.len());
        for rec in &self.records {
            row.clear();
            row.extend(rec.fields().iter().map(|v| format!("{v:.8e}")));
            w.write_record(&row)?;
        }
        w.flush()
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let malformed = |reason: String| Error::Trace {
            path: path.to_owned(),
            reason,
        };
        let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => Error::Io {
                path: path.to_owned(),
                source,
            },
            other => malformed(format!("{other:?}")),
        })?;
        let header = reader
            .headers()
            .map_err(|e| malformed(e.to_string()))?
            .clone();
        if !header.iter().eq(TRACE_HEADER) {
            return Err(malformed(format!(
                "expected header `{}`",
                TRACE_HEADER.join(",")
            )));
        }
        let mut trace = Trace::default();
        for (line, row) in reader.records().enumerate() {
            let row = row.map_err(|e| malformed(e.to_string()))?;
            let mut fields = [0.0; 11];
            for (slot, text) in fields.iter_mut().zip(row.iter()) {
                *slot = text
                    .trim()
                    .parse()
                    .map_err(|_| malformed(format!("row {}: cannot parse `{text}`", line + 1)))?;
            }
            trace.records.push(TraceRecord::from_fields(fields));
        }
        if trace.records.len() < 2 {
            return Err(malformed("need at least two samples".into()));
        }
        Ok(trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> Trace {
        let mut tr = Trace::default();
        for k in 0..n {
            let t = k as f64 * 1e-6;
            tr.records.push(TraceRecord {
                t,
                v_c: 12.0 * (1.0 - (-t / 1e-4).exp()),
                e: 12.0 * (-t / 1e-4).exp(),
                u: 0.6,
                k_c: 1.0,
                vin: 20.0,
                load: if k > n / 2 { 5.0 } else { 10.0 },
                ..Default::default()
            });
        }
        tr
    }

    #[test]
    fn csv_has_header_plus_rows_and_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        let tr = sample(101);
        tr.write_csv(&a).unwrap();
        tr.write_csv(&b).unwrap();
        let text = std::fs::read_to_string(&a).unwrap();
        assert_eq!(text.lines().count(), 102);
        assert_eq!(
            text.lines().next().unwrap(),
            "t,vC,iL,e,edot,S,u,k_c,r_v,vin,R"
        );
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn nine_significant_digits() {
        let tr = Trace {
            records: vec![TraceRecord {
                t: 1.0 / 3.0,
                ..Default::default()
            }],
        };
        let mut buf = Vec::new();
        tr.write_csv_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("3.33333333e-1,"));
    }

    #[test]
    fn read_back_within_print_precision() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let tr = sample(50);
        tr.write_csv(&path).unwrap();
        let back = Trace::read_csv(&path).unwrap();
        assert_eq!(back.len(), 50);
        for (a, b) in tr.records.iter().zip(&back.records) {
            assert!((a.v_c - b.v_c).abs() <= 1e-8 * a.v_c.abs().max(1e-300));
        }
        assert_eq!(back.first_disturbance(), Some(26e-6));
        assert_eq!(back.reference(), Some(12.0));
    }

    #[test]
    fn empty_path_is_reported() {
        let err = sample(3).write_csv(Path::new("")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.to_string().contains("I/O error on"));
    }

    #[test]
    fn bad_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(matches!(Trace::read_csv(&path), Err(Error::Trace { .. })));
    }
}
