//! The `table`, `sweep` and `bench` commands.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hp_oracle::{oracle_l, oracle_w, OracleConfig, OracleValue};
use crate::lmu_engine::{l_raised, LRequest};
use crate::neumann_driver::DEFAULT_MU_SWITCH;
use crate::series::{ExpansionSettings, SeriesOutcome};
use crate::wmu_engine::{w_sigma_large_order, BasicIntegralCache, WParams};

use super::reference::{mantissa, table_rows, ReferenceRow};
use super::report::{matching_digits, Quantity, ReportRow, RunReport};

/// Relative deviation from a published value that fails `table`.
pub const TABLE_TOLERANCE: f64 = 1e-13;

/// Engine settings shared by every command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub settings: ExpansionSettings,
    pub mu_switch: usize,
    /// Route every point through the oracle as well.
    pub oracle: Option<OracleConfig>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { settings: ExpansionSettings::default(), mu_switch: DEFAULT_MU_SWITCH, oracle: None }
    }
}

/// A grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    L(LRequest),
    W(WParams),
}

impl Point {
    fn blank_row(&self) -> ReportRow {
        let (quantity, mu, p1, p2, sigma, alpha1, alpha2) = match *self {
            Point::L(r) => (Quantity::L, r.mu, r.p, 0, r.sigma, r.alpha, None),
            Point::W(w) => (Quantity::W, w.mu, w.p1, w.p2, w.sigma, w.alpha1, Some(w.alpha2)),
        };
        ReportRow {
            quantity,
            mu,
            p1,
            p2,
            sigma,
            alpha1,
            alpha2,
            fast_value: None,
            reference_value: None,
            reference_terms: None,
            oracle_value: None,
            oracle_digits: None,
            matching_digits: None,
            terms_used: 0,
            converged: false,
            wall_time_us: 0.0,
            note: String::new(),
        }
    }

    /// Fast-path value.
    pub fn fast(&self, opts: &RunOptions) -> Result<SeriesOutcome> {
        match self {
            Point::L(r) => l_raised(r, &opts.settings, opts.mu_switch),
            Point::W(w) => {
                let mut cache = BasicIntegralCache::new(w.alpha1, w.alpha2)?;
                w_sigma_large_order(w, &mut cache, &opts.settings)
            }
        }
    }

    pub fn oracle(&self, cfg: &OracleConfig) -> Result<OracleValue> {
        match self {
            Point::L(r) => oracle_l(r.mu, r.sigma, r.p, r.alpha, cfg),
            Point::W(w) => oracle_w(w, cfg),
        }
    }

    /// Evaluates the point into a report row.
    pub fn evaluate(&self, opts: &RunOptions) -> ReportRow {
        let mut row = self.blank_row();
        let start = Instant::now();
        let fast = self.fast(opts);
        row.wall_time_us = start.elapsed().as_secs_f64() * 1e6;
        match fast {
            Ok(out) => {
                row.fast_value = Some(out.value);
                row.terms_used = out.terms_used;
                row.converged = out.converged;
            }
            Err(e) => row.note = e.to_string(),
        }
        if let Some(cfg) = &opts.oracle {
            match self.oracle(cfg) {
                Ok(v) => {
                    if let Some(x) = row.fast_value {
                        row.matching_digits = Some(matching_digits(x, v.to_f64()));
                    }
                    row.oracle_value = Some(v.to_decimal());
                    row.oracle_digits = Some(v.digits);
                }
                Err(e) => append_note(&mut row, &format!("oracle: {e}")),
            }
        }
        row
    }
}

fn append_note(row: &mut ReportRow, note: &str) {
    if !row.note.is_empty() {
        row.note.push_str("; ");
    }
    row.note.push_str(note);
}

fn reference_point(r: &ReferenceRow) -> Result<Point> {
    Ok(match r.alpha2 {
        None => Point::L(LRequest::new(r.mu, 0, r.p, r.alpha1)?),
        Some(a2) => Point::W(WParams::new(r.p, 0, 0, r.alpha1, a2, r.mu)?),
    })
}

/// Result of `table`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRun {
    pub report: RunReport,
    /// Converged rows deviating from the published exact value by more
    /// than [`TABLE_TOLERANCE`].
    pub mismatches: usize,
}

/// Evaluates every point of a published table through the fast path.
pub fn cmd_table(which: u8, opts: &RunOptions) -> Result<TableRun> {
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for r in table_rows(which)? {
        let mut row = reference_point(&r)?.evaluate(opts);
        row.reference_value = Some(r.exact);
        row.reference_terms = r.terms;
        if r.suspect_exponent {
            append_note(&mut row, "suspect published exponent; mantissa compared");
        }
        if r.published_divergent() {
            append_note(&mut row, "published as divergent");
        }
        if let Some(x) = row.fast_value {
            if row.oracle_value.is_none() {
                row.matching_digits = Some(if r.suspect_exponent {
                    matching_digits(mantissa(x), mantissa(r.exact))
                } else {
                    matching_digits(x, r.exact)
                });
            }
            if row.converged && r.rel_deviation(x) > TABLE_TOLERANCE {
                mismatches += 1;
                append_note(&mut row, "deviates from published value");
            }
        }
        rows.push(row);
    }
    Ok(TableRun { report: RunReport { rows }, mismatches })
}

/// Cartesian grid for `sweep`. An empty `alpha2` selects `L`, otherwise `W`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepGrid {
    pub mu: Vec<usize>,
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    pub sigma: Vec<usize>,
    pub alpha1: Vec<f64>,
    pub alpha2: Vec<f64>,
}

impl SweepGrid {
    /// Points in grid order: `α₁`, `α₂`, `p₁`, `p₂`, `σ`, then `μ` innermost.
    /// Points with `σ > μ` are skipped.
    pub fn points(&self) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        let p2s: &[usize] = if self.alpha2.is_empty() { &[0] } else { &self.p2 };
        for &a1 in &self.alpha1 {
            let a2s: Vec<Option<f64>> =
                if self.alpha2.is_empty() { vec![None] } else { self.alpha2.iter().copied().map(Some).collect() };
            for a2 in a2s {
                for &p1 in &self.p1 {
                    for &p2 in p2s {
                        for &sigma in &self.sigma {
                            for &mu in self.mu.iter().filter(|&&m| m >= sigma) {
                                out.push(match a2 {
                                    None => Point::L(LRequest::new(mu, sigma, p1, a1)?),
                                    Some(a2) => Point::W(WParams::new(p1, p2, sigma, a1, a2, mu)?),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Evaluates every grid point. Divergence is recorded, not raised.
pub fn cmd_sweep(grid: &SweepGrid, opts: &RunOptions) -> Result<RunReport> {
    let rows = grid.points()?.iter().map(|p| p.evaluate(opts)).collect();
    Ok(RunReport { rows })
}

/// Timing of one path over a table grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchLine {
    pub label: String,
    pub values: usize,
    pub repetitions: usize,
    pub mean_us: f64,
    pub stddev_us: f64,
}

fn stats(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 { samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Times the fast path over a table grid, per value. With an oracle
/// configured, also times the oracle on the first four points.
pub fn cmd_bench(reps: usize, which: u8, opts: &RunOptions) -> Result<Vec<BenchLine>> {
    if reps == 0 {
        return Err(Error::Settings("invalid repetitions: must be at least 1".into()));
    }
    let points: Vec<Point> = table_rows(which)?.iter().map(reference_point).collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(reps * points.len());
    for _ in 0..reps {
        for p in &points {
            let t = Instant::now();
            let _ = std::hint::black_box(p.fast(opts));
            samples.push(t.elapsed().as_secs_f64() * 1e6);
        }
    }
    let (mean, sd) = stats(&samples);
    let mut lines = vec![BenchLine {
        label: format!("table {which} fast path"),
        values: points.len(),
        repetitions: reps,
        mean_us: mean,
        stddev_us: sd,
    }];
    if let Some(cfg) = &opts.oracle {
        let mut fast = Vec::new();
        let mut slow = Vec::new();
        for p in points.iter().take(4) {
            for _ in 0..reps {
                let t = Instant::now();
                let _ = std::hint::black_box(p.fast(opts));
                fast.push(t.elapsed().as_secs_f64() * 1e6);
            }
            let t = Instant::now();
            let _ = std::hint::black_box(p.oracle(cfg));
            slow.push(t.elapsed().as_secs_f64() * 1e6);
        }
        let (fm, fs) = stats(&fast);
        let (om, os) = stats(&slow);
        let n = points.len().min(4);
        lines.push(BenchLine { label: "fast path, first 4 points".into(), values: n, repetitions: reps, mean_us: fm, stddev_us: fs });
        lines.push(BenchLine {
            label: format!("oracle, first 4 points ({:.0}x slower)", om / fm),
            values: n,
            repetitions: 1,
            mean_us: om,
            stddev_us: os,
        });
    }
    Ok(lines)
}
