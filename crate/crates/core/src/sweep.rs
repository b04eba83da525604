//! Parameter sweeps over `(N, k, a)` and their CSV rendering.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::{tangle_record, DickeParams, TangleRecord};

pub const CSV_HEADER: &str = "N,k,a,c1_sq,c2_sq,tau,n2,xi";
pub const DEFAULT_PRECISION: usize = 12;

/// Which degeneracies to sweep for each `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KSelection {
    /// `1..=N/2`.
    All,
    List(Vec<usize>),
}

impl FromStr for KSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("all") {
            Ok(Self::All)
        } else {
            parse_usize_list(s).map(Self::List)
        }
    }
}

impl fmt::Display for KSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::All => f.write_str("all"),
            Self::List(ks) => {
                let parts: Vec<String> = ks.iter().map(usize::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// Parses `"3,10,100"` (whitespace tolerated).
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let values: Vec<usize> = s
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParams(format!("'{part}' is not a nonnegative integer")))
        })
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(Error::InvalidParams("empty list".into()));
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub k_values: KSelection,
    pub a_min: f64,
    pub a_max: f64,
    pub a_steps: usize,
    /// Digits after the decimal point in the CSV.
    pub precision: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_values: vec![10, 100],
            k_values: KSelection::All,
            a_min: 0.0,
            a_max: 1.0,
            a_steps: 101,
            precision: DEFAULT_PRECISION,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::InvalidParams("no N values given".into()));
        }
        if !(0.0..=1.0).contains(&self.a_min) || !(0.0..=1.0).contains(&self.a_max) {
            return Err(Error::InvalidParams(format!(
                "a range [{}, {}] must lie within [0, 1]",
                self.a_min, self.a_max
            )));
        }
        if self.a_min > self.a_max {
            return Err(Error::InvalidParams(format!(
                "a_min {} exceeds a_max {}",
                self.a_min, self.a_max
            )));
        }
        if self.a_steps < 2 {
            return Err(Error::InvalidParams(format!(
                "a_steps = {} must be at least 2",
                self.a_steps
            )));
        }
        Ok(())
    }

    /// Grid points in lexicographic `(N, k, a)` order, plus one warning per
    /// requested `(N, k)` pair that is not a valid state.
    pub fn grid(&self) -> Result<(Vec<DickeParams>, Vec<String>)> {
        self.validate()?;
        let a_values = a_grid(self.a_min, self.a_max, self.a_steps);
        let mut ns = self.n_values.clone();
        ns.sort_unstable();
        ns.dedup();

        let mut points = Vec::new();
        let mut warnings = Vec::new();
        for &n in &ns {
            let ks: Vec<usize> = match &self.k_values {
                KSelection::All => (1..=n / 2).collect(),
                KSelection::List(list) => {
                    let mut ks = list.clone();
                    ks.sort_unstable();
                    ks.dedup();
                    ks
                }
            };
            if ks.is_empty() {
                warnings.push(format!("skipping N={n}: no valid k"));
            }
            for k in ks {
                match DickeParams::new(n, k, 0.0) {
                    Ok(_) => points.extend(
                        a_values
                            .iter()
                            .map(|&a| DickeParams::new(n, k, a).expect("validated")),
                    ),
                    Err(e) => warnings.push(format!("skipping N={n}, k={k}: {e}")),
                }
            }
        }
        Ok((points, warnings))
    }
}

/// `steps` points from `lo` to `hi`, both endpoints included exactly.
pub fn a_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let span = hi - lo;
            let last = (steps - 1) as f64;
            (0..steps)
                .map(|i| {
                    if i + 1 == steps {
                        hi
                    } else {
                        lo + i as f64 * span / last
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutput {
    pub records: Vec<TangleRecord>,
    pub warnings: Vec<String>,
}

/// Evaluates every grid point in parallel; output order is the grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let (points, mut warnings) = cfg.grid()?;
    let results: Vec<Result<TangleRecord>> = points.par_iter().map(tangle_record).collect();
    let mut records = Vec::with_capacity(results.len());
    for (p, res) in points.iter().zip(results) {
        match res {
            Ok(r) => records.push(r),
            Err(e) => warnings.push(format!(
                "row N={}, k={}, a={} failed: {e}",
                p.n_qubits(),
                p.degeneracy(),
                p.a()
            )),
        }
    }
    Ok(SweepOutput { records, warnings })
}

/// Fixed-point rendering with `.` as separator; negative zero prints as zero.
pub fn format_fixed(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn csv_row(r: &TangleRecord, precision: usize) -> String {
    let p = &r.params;
    let fields = [p.a(), r.c1_sq, r.c2_sq, r.tau, r.n2, r.xi].map(|x| format_fixed(x, precision));
    format!("{},{},{}", p.n_qubits(), p.degeneracy(), fields.join(","))
}

/// Header plus one LF-terminated line per record.
pub fn write_csv<W: Write>(
    records: &[TangleRecord],
    precision: usize,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", csv_row(r, precision))?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(ns: &[usize], ks: KSelection, steps: usize) -> SweepConfig {
        SweepConfig {
            n_values: ns.to_vec(),
            k_values: ks,
            a_steps: steps,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn k_selection_parsing() {
        assert_eq!("all".parse::<KSelection>().unwrap(), KSelection::All);
        assert_eq!(
            "2, 3,5".parse::<KSelection>().unwrap(),
            KSelection::List(vec![2, 3, 5])
        );
        assert!("2,x".parse::<KSelection>().is_err());
        assert!("".parse::<KSelection>().is_err());
        assert_eq!(KSelection::List(vec![1, 4]).to_string(), "1,4");
    }

    #[test]
    fn a_grid_endpoints_are_exact() {
        let g = a_grid(0.0, 1.0, 101);
        assert_eq!(g.len(), 101);
        assert_eq!((g[0], g[50], g[100]), (0.0, 0.5, 1.0));
        assert_eq!(a_grid(0.2, 0.7, 2), vec![0.2, 0.7]);
        let g = a_grid(0.1, 0.9, 7);
        assert_eq!(*g.last().unwrap(), 0.9);
    }

    #[test]
    fn config_validation() {
        let mut c = SweepConfig::default();
        assert!(c.validate().is_ok());
        c.a_steps = 1;
        assert!(c.validate().is_err());
        c = SweepConfig {
            a_min: 0.8,
            a_max: 0.2,
            ..SweepConfig::default()
        };
        assert!(c.validate().is_err());
        c = SweepConfig {
            a_max: 1.5,
            ..SweepConfig::default()
        };
        assert!(c.validate().is_err());
        c = SweepConfig {
            n_values: vec![],
            ..SweepConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn grid_is_lexicographic_and_skips_invalid_pairs() {
        let c = cfg(&[6, 4], KSelection::List(vec![3, 1]), 3);
        let (points, warnings) = c.grid().unwrap();
        let keys: Vec<(usize, usize, f64)> = points
            .iter()
            .map(|p| (p.n_qubits(), p.degeneracy(), p.a()))
            .collect();
        assert_eq!(
            keys,
            vec![
                (4, 1, 0.0),
                (4, 1, 0.5),
                (4, 1, 1.0),
                (6, 1, 0.0),
                (6, 1, 0.5),
                (6, 1, 1.0),
                (6, 3, 0.0),
                (6, 3, 0.5),
                (6, 3, 1.0)
            ]
        );
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("N=4, k=3"));
    }

    #[test]
    fn all_k_expands_per_n() {
        let (points, warnings) = cfg(&[5, 1], KSelection::All, 2).grid().unwrap();
        assert_eq!(points.len(), 4);
        assert_eq!(warnings, vec!["skipping N=1: no valid k".to_string()]);
    }

    #[test]
    fn w_class_sweep_has_vanishing_tau() {
        let out = run_sweep(&cfg(&[3], KSelection::List(vec![1]), 3)).unwrap();
        assert_eq!(out.records.len(), 3);
        assert!(out.records.iter().all(|r| r.tau.abs() < 1e-9));
    }

    #[test]
    fn negative_zero_renders_as_zero() {
        assert_eq!(format_fixed(-1e-17, 6), "0.000000");
        assert_eq!(format_fixed(-0.0, 3), "0.000");
        assert_eq!(format_fixed(-0.25, 2), "-0.25");
        assert_eq!(format_fixed(2.0 / 3.0, 12), "0.666666666667");
    }

    #[test]
    fn csv_layout() {
        let out = run_sweep(&cfg(&[4], KSelection::List(vec![2]), 2)).unwrap();
        let mut buf = Vec::new();
        write_csv(&out.records, 6, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "N,k,a,c1_sq,c2_sq,tau,n2,xi\n\
             4,2,0.000000,1.000000,0.111111,0.666667,0.333333,0.666667\n\
             4,2,1.000000,0.000000,0.000000,0.000000,0.000000,0.000000\n"
        );
    }
}
