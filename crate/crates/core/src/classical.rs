//! The classical relaxation method: repeatedly step from the current point
//! toward (and past, for `λ > 1`) the hyperplane of a violated row.
//!
//! Equalities take part as two-sided rows with violation
//! `|a·z − b|/‖a‖`. A point is accepted once every normalized violation is
//! below `ε`, so `Feasible` here means `ε`-feasible.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{axpy, dot};
use crate::model::LinearSystem;
use crate::solvers::{Decision, SolveReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Selection {
    /// Largest normalized violation, lowest index on ties.
    MaxViolation,
    /// Uniform over rows violated by at least `ε`.
    RandomViolation { seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxConfig {
    pub lambda: f64,
    pub eps: f64,
    pub selection: Selection,
    pub max_iters: u64,
    pub time_limit: Option<Duration>,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        RelaxConfig {
            lambda: 1.9,
            eps: 1e-6,
            selection: Selection::MaxViolation,
            max_iters: 10_000_000,
            time_limit: Some(Duration::from_secs(600)),
        }
    }
}

impl RelaxConfig {
    pub fn validate(&self) -> Result<(), ClassicalError> {
        if !(self.lambda > 0.0 && self.lambda <= 2.0) {
            return Err(ClassicalError::InvalidConfig(format!(
                "λ must lie in (0, 2], got {}",
                self.lambda
            )));
        }
        if !(self.eps > 0.0) {
            return Err(ClassicalError::InvalidConfig(format!(
                "ε must be positive, got {}",
                self.eps
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("start point has {found} entries, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("random statistics need RandomViolation selection and at least one run")]
    NotRandom,
}

/// Row `i` of the stacked system: equalities first, then inequalities.
struct Rows<'a> {
    sys: &'a LinearSystem,
    norms: Vec<f64>,
    norms_sq: Vec<f64>,
}

impl<'a> Rows<'a> {
    fn new(sys: &'a LinearSystem) -> Self {
        let norms_sq: Vec<f64> = sys
            .a()
            .iter_rows()
            .chain(sys.c().iter_rows())
            .map(|r| dot(r, r))
            .collect();
        let norms = norms_sq.iter().map(|v| v.sqrt()).collect();
        Rows { sys, norms, norms_sq }
    }

    fn len(&self) -> usize {
        self.norms.len()
    }

    fn row(&self, i: usize) -> (&[f64], f64) {
        let m = self.sys.m();
        if i < m {
            (self.sys.a().row(i), self.sys.b()[i])
        } else {
            (self.sys.c().row(i - m), self.sys.d()[i - m])
        }
    }

    /// Normalized violation: signed for inequalities, absolute for equalities.
    fn violation(&self, i: usize, z: &[f64]) -> f64 {
        let (r, rhs) = self.row(i);
        let s = (dot(r, z) - rhs) / self.norms[i];
        if i < self.sys.m() {
            s.abs()
        } else {
            s
        }
    }
}

/// Runs the method from `z0`. `iterations` in the report counts projection
/// steps; zero means `z0` was already acceptable.
pub fn relax_solve(sys: &LinearSystem, z0: &[f64], cfg: &RelaxConfig) -> Result<SolveReport, ClassicalError> {
    relax_observed(sys, z0, cfg, 0, |_| {})
}

/// [`relax_solve`] calling `observe` on the start point and every iterate.
/// `run_index` selects the random stream for [`Selection::RandomViolation`].
pub fn relax_observed(
    sys: &LinearSystem,
    z0: &[f64],
    cfg: &RelaxConfig,
    run_index: u64,
    mut observe: impl FnMut(&[f64]),
) -> Result<SolveReport, ClassicalError> {
    cfg.validate()?;
    if z0.len() != sys.n() {
        return Err(ClassicalError::DimensionMismatch {
            expected: sys.n(),
            found: z0.len(),
        });
    }
    let start = Instant::now();
    let deadline = cfg.time_limit.map(|t| start + t);
    let mut rng = match cfg.selection {
        Selection::RandomViolation { seed } => {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(run_index);
            Some(r)
        }
        Selection::MaxViolation => None,
    };
    let rows = Rows::new(sys);
    let mut z = z0.to_vec();
    let mut violated = Vec::with_capacity(rows.len());
    let mut iterations = 0u64;
    observe(&z);
    let decision = loop {
        violated.clear();
        let mut best: Option<(usize, f64)> = None;
        for i in 0..rows.len() {
            let v = rows.violation(i, &z);
            if v >= cfg.eps {
                violated.push(i);
                if best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((i, v));
                }
            }
        }
        let Some((argmax, _)) = best else {
            break Decision::Feasible(z.clone());
        };
        if iterations >= cfg.max_iters {
            break Decision::BudgetExceeded;
        }
        if iterations.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() >= d) {
            break Decision::TimedOut;
        }
        let i = match &mut rng {
            Some(r) => violated[r.gen_range(0..violated.len())],
            None => argmax,
        };
        let (row, rhs) = rows.row(i);
        let step = cfg.lambda * (dot(row, &z) - rhs) / rows.norms_sq[i];
        axpy(-step, row, &mut z);
        iterations += 1;
        observe(&z);
    };
    let mut report = SolveReport::new(match cfg.selection {
        Selection::MaxViolation => "relax",
        Selection::RandomViolation { .. } => "relax-rand",
    });
    report.decision = decision;
    report.iterations = iterations;
    report.elapsed = start.elapsed();
    if matches!(report.decision, Decision::Feasible(_)) {
        report.notes.push(format!("every row within ε = {:e}", cfg.eps));
    }
    Ok(report)
}

/// Iteration and timing statistics over repeated random-selection runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelaxStats {
    pub runs: usize,
    pub avg_iters: f64,
    pub std_iters: f64,
    pub min_iters: u64,
    pub max_iters: u64,
    pub avg_time: f64,
    pub std_time: f64,
    /// Runs that hit the time or iteration limit.
    pub unfinished: usize,
}

/// Mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Runs `runs` independent random-selection solves; run `k` uses stream `k`
/// of the configured seed.
pub fn relax_random_stats(
    sys: &LinearSystem,
    z0: &[f64],
    cfg: &RelaxConfig,
    runs: usize,
) -> Result<RelaxStats, ClassicalError> {
    if runs == 0 || !matches!(cfg.selection, Selection::RandomViolation { .. }) {
        return Err(ClassicalError::NotRandom);
    }
    let reports = (0..runs as u64)
        .into_par_iter()
        .map(|k| relax_observed(sys, z0, cfg, k, |_| {}))
        .collect::<Result<Vec<_>, _>>()?;
    let iters: Vec<f64> = reports.iter().map(|r| r.iterations as f64).collect();
    let times: Vec<f64> = reports.iter().map(|r| r.elapsed.as_secs_f64()).collect();
    let (avg_iters, std_iters) = mean_std(&iters);
    let (avg_time, std_time) = mean_std(&times);
    Ok(RelaxStats {
        runs,
        avg_iters,
        std_iters,
        min_iters: reports.iter().map(|r| r.iterations).min().unwrap_or(0),
        max_iters: reports.iter().map(|r| r.iterations).max().unwrap_or(0),
        avg_time,
        std_time,
        unfinished: reports.iter().filter(|r| r.decision.exit_code() == 2).count(),
    })
}
