//! Property checks over parameter grids and the brute-force equivalence report.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::marginals::SingleQubitMarginal;
use crate::measures::negativity_of_matrix;
use crate::oracle::Spinor;
use crate::sweep::a_grid;
use crate::{
    concurrence_two_qubit, marginal_matrix, one_vs_rest, single_qubit_marginal, tangle_record,
    two_qubit_marginal, DickeParams, Oracle, TangleRecord,
};

/// Largest `N` the `oracle` report accepts by default.
pub const ORACLE_REPORT_CAP: usize = 12;

/// A grid point that broke a property.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub n: usize,
    pub k: usize,
    pub a: f64,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={}, k={}, a={}: {}",
            self.n, self.k, self.a, self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// The first violation in grid order.
    pub first: Option<Violation>,
}

impl PropertyOutcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            violations: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, violation: impl FnOnce() -> Violation) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(violation());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn line(&self) -> String {
        match &self.first {
            None => format!("PASS {} ({} checks)", self.name, self.checked),
            Some(v) => format!(
                "FAIL {} ({} of {} checks) first at {v}",
                self.name, self.violations, self.checked
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    /// Every `N` in `3..=n_max` is checked with all `k`.
    pub n_max: usize,
    pub a_steps: usize,
    pub tol: f64,
    /// Extra `N` values beyond `n_max`, checked for `k <= spot_k_max`.
    pub spot_n: Vec<usize>,
    pub spot_k_max: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            n_max: 12,
            a_steps: 101,
            tol: 1e-9,
            spot_n: vec![50, 100],
            spot_k_max: 5,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 3 {
            return Err(Error::InvalidParams(format!(
                "n_max = {} must be at least 3",
                self.n_max
            )));
        }
        if self.a_steps < 2 {
            return Err(Error::InvalidParams(format!(
                "a_steps = {} must be at least 2",
                self.a_steps
            )));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "tol = {} must be finite and nonnegative",
                self.tol
            )));
        }
        Ok(())
    }

    /// `(N, k)` cells in ascending order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut cells: Vec<(usize, usize)> = (3..=self.n_max)
            .flat_map(|n| (1..=n / 2).map(move |k| (n, k)))
            .collect();
        let mut spots = self.spot_n.clone();
        spots.sort_unstable();
        spots.dedup();
        for n in spots.into_iter().filter(|&n| n > self.n_max) {
            cells.extend((1..=self.spot_k_max.min(n / 2)).map(|k| (n, k)));
        }
        cells
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub points: usize,
    pub properties: Vec<PropertyOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn lines(&self) -> Vec<String> {
        self.properties.iter().map(PropertyOutcome::line).collect()
    }

    pub fn property(&self, name: &str) -> Option<&PropertyOutcome> {
        self.properties.iter().find(|p| p.name == name)
    }
}

/// Runs the property suite with the standard pipeline.
pub fn run_check(cfg: &CheckConfig) -> Result<CheckReport> {
    run_check_with(cfg, tangle_record)
}

/// Runs the property suite with a caller-supplied evaluator, so that
/// deliberately broken pipelines can be shown to fail.
pub fn run_check_with<F>(cfg: &CheckConfig, eval: F) -> Result<CheckReport>
where
    F: Fn(&DickeParams) -> Result<TangleRecord> + Sync,
{
    cfg.validate()?;
    let a_values = a_grid(0.0, 1.0, cfg.a_steps);
    let cells = cfg.cells();
    let tol = cfg.tol;

    type Row = Vec<Result<TangleRecord>>;
    let evaluated: Vec<((usize, usize), Row)> = cells
        .par_iter()
        .map(|&(n, k)| {
            let row = a_values
                .iter()
                .map(|&a| DickeParams::new(n, k, a).and_then(|p| eval(&p)))
                .collect();
            ((n, k), row)
        })
        .collect();

    let mut evaluation = PropertyOutcome::new("evaluation");
    let mut table: BTreeMap<(usize, usize), Vec<Option<TangleRecord>>> = BTreeMap::new();
    for ((n, k), row) in evaluated {
        let row = row
            .into_iter()
            .zip(&a_values)
            .map(|(res, &a)| match res {
                Ok(r) => {
                    evaluation.record(true, || unreachable!());
                    Some(r)
                }
                Err(e) => {
                    evaluation.record(false, || violation(n, k, a, e.to_string()));
                    None
                }
            })
            .collect();
        table.insert((n, k), row);
    }

    let mut bounds = PropertyOutcome::new("bounds");
    let mut monogamy = PropertyOutcome::new("monogamy");
    let mut ordering = PropertyOutcome::new("measure-ordering");
    let mut saturation = PropertyOutcome::new("w-saturation");
    let mut a_mono = PropertyOutcome::new("a-monotonicity");
    let mut a0_max = PropertyOutcome::new("a0-maximum");
    let mut endpoint = PropertyOutcome::new("a1-endpoint");

    for (&(n, k), row) in &table {
        let present: Vec<&TangleRecord> = row.iter().flatten().collect();
        for r in &present {
            let a = r.params.a();
            let in_unit = |x: f64| x.is_finite() && x >= -tol && x <= 1.0 + tol;
            bounds.record(
                in_unit(r.c1_sq) && in_unit(r.c2_sq) && in_unit(r.n2),
                || {
                    violation(
                        n,
                        k,
                        a,
                        format!("c1_sq={}, c2_sq={}, n2={}", r.c1_sq, r.c2_sq, r.n2),
                    )
                },
            );
            monogamy.record(r.tau >= -tol && r.xi >= -tol, || {
                violation(n, k, a, format!("tau={:e}, xi={:e}", r.tau, r.xi))
            });
            ordering.record(r.xi - r.tau >= -tol, || {
                violation(n, k, a, format!("xi - tau = {:e}", r.xi - r.tau))
            });
            if k == 1 {
                saturation.record(r.tau.abs() <= tol, || {
                    violation(n, k, a, format!("tau={:e}", r.tau))
                });
            }
            if a == 1.0 {
                let worst = [r.c1_sq, r.c2_sq, r.tau, r.n2, r.xi]
                    .iter()
                    .fold(0.0f64, |m, x| m.max(x.abs()));
                endpoint.record(worst <= tol, || {
                    violation(n, k, a, format!("largest measure {worst:e}"))
                });
            }
        }

        if k >= 2 {
            for pair in row.windows(2) {
                if let [Some(lo), Some(hi)] = pair {
                    let a = hi.params.a();
                    a_mono.record(hi.tau <= lo.tau + tol && hi.xi <= lo.xi + tol, || {
                        violation(
                            n,
                            k,
                            a,
                            format!("tau {} -> {}, xi {} -> {}", lo.tau, hi.tau, lo.xi, hi.xi),
                        )
                    });
                }
            }
        }

        if let Some(Some(first)) = row.first() {
            if first.params.a() == 0.0 {
                for r in &present {
                    let a = r.params.a();
                    a0_max.record(r.tau <= first.tau + tol, || {
                        violation(
                            n,
                            k,
                            a,
                            format!("tau={} exceeds tau(a=0)={}", r.tau, first.tau),
                        )
                    });
                }
            }
        }
    }

    let mut k_order = PropertyOutcome::new("k-ordering");
    let mut n_decay = PropertyOutcome::new("n-decay");
    for (&(n, k), row) in &table {
        if let Some(next) = table.get(&(n, k + 1)) {
            for (lo, hi) in row.iter().zip(next) {
                if let (Some(lo), Some(hi)) = (lo, hi) {
                    let a = lo.params.a();
                    if a < 1.0 {
                        k_order.record(hi.tau >= lo.tau - tol, || {
                            violation(
                                n,
                                k + 1,
                                a,
                                format!("tau {} below k={} value {}", hi.tau, k, lo.tau),
                            )
                        });
                    }
                }
            }
        }
        // The decay only sets in once N exceeds 2k; from N = 2k to 2k + 1 the
        // tangle grows.
        if n < 2 * k + 1 {
            continue;
        }
        let larger = table
            .range((n + 1, k)..)
            .find(|(&(m, j), _)| j == k && m > n);
        if let Some((&(m, _), next)) = larger {
            for (lo, hi) in row.iter().zip(next) {
                if let (Some(lo), Some(hi)) = (lo, hi) {
                    let a = lo.params.a();
                    n_decay.record(hi.tau <= lo.tau + tol, || {
                        violation(
                            m,
                            k,
                            a,
                            format!("tau {} exceeds N={} value {}", hi.tau, n, lo.tau),
                        )
                    });
                }
            }
        }
    }

    let points = cells.len() * a_values.len();
    Ok(CheckReport {
        points,
        properties: vec![
            evaluation, bounds, monogamy, ordering, saturation, a_mono, k_order, n_decay, a0_max,
            endpoint,
        ],
    })
}

fn violation(n: usize, k: usize, a: f64, detail: String) -> Violation {
    Violation { n, k, a, detail }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Every `N` in `2..=n_max` is compared with all `k`.
    pub n_max: usize,
    pub a_steps: usize,
    pub tol: f64,
    pub cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_max: 12,
            a_steps: 11,
            tol: 1e-10,
            cap: ORACLE_REPORT_CAP,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max > self.cap {
            return Err(Error::CapExceeded {
                n: self.n_max,
                cap: self.cap,
            });
        }
        if self.n_max < 2 {
            return Err(Error::InvalidParams(format!(
                "n_max = {} must be at least 2",
                self.n_max
            )));
        }
        if self.a_steps < 2 {
            return Err(Error::InvalidParams(format!(
                "a_steps = {} must be at least 2",
                self.a_steps
            )));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "tol = {} must be finite and nonnegative",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Largest absolute disagreements between the analytic pipeline and the
/// brute-force state for one `(N, k)` cell, maximized over the `a` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCell {
    pub n: usize,
    pub k: usize,
    /// Expansion in the symmetric basis vs. the symmetrized two-spinor state.
    pub state: f64,
    /// Two-qubit marginal entries.
    pub marginal: f64,
    /// Single-qubit marginal entries.
    pub single: f64,
    /// Any pair `(i, j)` against the pair `(0, 1)`.
    pub pairs: f64,
    /// Largest imaginary part in the brute-force reduced states.
    pub imag: f64,
    pub c1: f64,
    pub c2: f64,
    pub n2: f64,
    /// Set when a grid point could not be evaluated.
    pub error: Option<String>,
}

impl OracleCell {
    /// Largest deviation in matrices and states.
    pub fn entry_deviation(&self) -> f64 {
        [
            self.state,
            self.marginal,
            self.single,
            self.pairs,
            self.imag,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Largest deviation in the derived measures.
    pub fn measure_deviation(&self) -> f64 {
        [self.c1, self.c2, self.n2].into_iter().fold(0.0, f64::max)
    }

    pub fn max_deviation(&self) -> f64 {
        self.entry_deviation().max(self.measure_deviation())
    }

    pub fn line(&self, tol: f64) -> String {
        let status = if self.passed(tol) { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} N={} k={} state={:.3e} marginal={:.3e} single={:.3e} pairs={:.3e} imag={:.3e} c1={:.3e} c2={:.3e} n2={:.3e}",
            self.n, self.k, self.state, self.marginal, self.single, self.pairs, self.imag, self.c1, self.c2, self.n2
        );
        if let Some(e) = &self.error {
            s.push_str(&format!(" error: {e}"));
        }
        s
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.error.is_none() && self.max_deviation() <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub tol: f64,
    pub cells: Vec<OracleCell>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.passed(self.tol))
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn worst(&self) -> Option<&OracleCell> {
        self.cells.iter().max_by(|x, y| {
            let key = |c: &OracleCell| (c.error.is_some(), c.max_deviation());
            key(x)
                .partial_cmp(&key(y))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }

    pub fn max_entry_deviation(&self) -> f64 {
        self.cells
            .iter()
            .map(OracleCell::entry_deviation)
            .fold(0.0, f64::max)
    }

    pub fn max_measure_deviation(&self) -> f64 {
        self.cells
            .iter()
            .map(OracleCell::measure_deviation)
            .fold(0.0, f64::max)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.cells.iter().map(|c| c.line(self.tol)).collect();
        let summary = match self.worst() {
            Some(w) if !self.passed() => format!("FAIL oracle equivalence, worst cell N={} k={}", w.n, w.k),
            _ => format!(
                "PASS oracle equivalence ({} cells, max entry deviation {:.3e}, max measure deviation {:.3e})",
                self.cells.len(),
                self.max_entry_deviation(),
                self.max_measure_deviation()
            ),
        };
        lines.push(summary);
        lines
    }
}

pub fn run_oracle(cfg: &OracleConfig) -> Result<OracleReport> {
    cfg.validate()?;
    let oracle = Oracle::with_cap(cfg.cap);
    let a_values = a_grid(0.0, 1.0, cfg.a_steps);
    let cells: Vec<(usize, usize)> = (2..=cfg.n_max)
        .flat_map(|n| (1..=n / 2).map(move |k| (n, k)))
        .collect();
    let cells = cells
        .par_iter()
        .map(|&(n, k)| {
            let mut cell = OracleCell {
                n,
                k,
                state: 0.0,
                marginal: 0.0,
                single: 0.0,
                pairs: 0.0,
                imag: 0.0,
                c1: 0.0,
                c2: 0.0,
                n2: 0.0,
                error: None,
            };
            for &a in &a_values {
                if let Err(e) = compare_point(&oracle, n, k, a, &mut cell) {
                    cell.error = Some(format!("a={a}: {e}"));
                    break;
                }
            }
            cell
        })
        .collect();
    Ok(OracleReport {
        tol: cfg.tol,
        cells,
    })
}

fn compare_point(oracle: &Oracle, n: usize, k: usize, a: f64, cell: &mut OracleCell) -> Result<()> {
    let params = DickeParams::new(n, k, a)?;
    let expanded = oracle.expand_state(&params)?;
    let spinor_form = oracle.symmetrize_two_spinors(n, k, &Spinor::zero(), &Spinor::real(a)?)?;
    let state_dev = expanded.max_abs_diff(&spinor_form).unwrap_or(f64::INFINITY);

    let analytic = two_qubit_marginal(&params)?;
    let rho2 = marginal_matrix(&analytic)?;
    let rho1 = single_qubit_marginal(&analytic)?;
    let record = TangleRecord::from_marginal(&analytic)?;

    let pair = expanded.reduced_density(&[0, 1])?;
    let one = expanded.reduced_density(&[0])?;
    let brute2 = pair.to_real(f64::INFINITY)?;
    let brute1 = one.to_real(f64::INFINITY)?;
    let mut pairs_dev = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            if (i, j) != (0, 1) {
                let other = expanded.partial_trace_to_pair(i, j)?;
                pairs_dev = pairs_dev.max(other.max_abs_diff(&brute2).unwrap_or(f64::INFINITY));
            }
        }
    }

    let c2 = concurrence_two_qubit(&brute2)?;
    let n2 = negativity_of_matrix(&brute2)?;
    let c1 = one_vs_rest(&SingleQubitMarginal { m: brute1 })?;

    cell.state = cell.state.max(state_dev);
    cell.marginal = cell
        .marginal
        .max(rho2.max_abs_diff(&brute2).unwrap_or(f64::INFINITY));
    cell.single = cell
        .single
        .max(rho1.m.max_abs_diff(&brute1).unwrap_or(f64::INFINITY));
    cell.pairs = cell.pairs.max(pairs_dev);
    cell.imag = cell.imag.max(pair.max_imag()).max(one.max_imag());
    cell.c1 = cell.c1.max((c1 * c1 - record.c1_sq).abs());
    cell.c2 = cell.c2.max((c2 * c2 - record.c2_sq).abs());
    cell.n2 = cell.n2.max((n2 - record.n2).abs());
    Ok(())
}
