use std::time::Instant;

use super::{Decision, SolveOptions, SolveReport, SolverError, TraceEntry};
use crate::dnc::{dnc, DnCOutcome};
use crate::inference::recover_solution;
use crate::linalg::Matrix;
use crate::model::{homogenize, standardize_bounded, strengthen, EqualityReduction, LinearSystem};

/// `Ax = b, x ≥ 0` with every solution inside `B(0, r)` and every square
/// submatrix of `A` of absolute determinant at most `delta`.
#[derive(Clone, Debug)]
pub struct LfsInput {
    pub a: Matrix,
    pub b: Vec<f64>,
    pub r: f64,
    pub delta: f64,
}

/// `2nΔ√(r² + 1)`
pub fn lfs_radius(n: usize, delta: f64, r: f64) -> f64 {
    2.0 * n as f64 * delta * (r * r + 1.0).sqrt()
}

/// Decides `Ax = b, x ≥ 0` under the promise that it is either infeasible or
/// has a solution with `x > 0`.
///
/// A single search on `Ax − bt = 0, −x ≤ −1, −t ≤ −2` from the origin
/// settles it: a solution `(x*, t*)` gives `x*/t*`, and any separator or
/// failure means no strictly positive solution exists.
pub fn lfs(input: &LfsInput, opts: &SolveOptions) -> Result<SolveReport, SolverError> {
    let start = Instant::now();
    let mut report = SolveReport::new("lfs");
    if !(input.r > 0.0) || !(input.delta >= 1.0) {
        return Err(SolverError::InvalidInput(format!(
            "need r > 0 and Δ ≥ 1 (got r = {}, Δ = {})",
            input.r, input.delta
        )));
    }
    let n = input.a.ncols();
    let mut neg_identity = Matrix::zeros(n, n);
    for j in 0..n {
        neg_identity[(j, j)] = -1.0;
    }
    let sys = LinearSystem::new(input.a.clone(), input.b.clone(), neg_identity, vec![0.0; n])?;
    let sys = match sys.reduce_equalities() {
        EqualityReduction::Reduced(s) => s,
        EqualityReduction::Inconsistent { row } => {
            report.decision = Decision::Infeasible;
            report.notes.push(format!("equality row {row} contradicts the others"));
            report.elapsed = start.elapsed();
            return Ok(report);
        }
    };

    let lifted = strengthen(&homogenize(&sys), 1.0)?;
    let r_hat = lfs_radius(n, input.delta, input.r);
    let run = dnc(&lifted, &vec![0.0; n + 1], r_hat, &opts.params(start))?;
    report.absorb(&run.counters);
    report.decision = match run.outcome {
        DnCOutcome::ApproxSolution(xt) => Decision::Feasible(recover_solution(&sys, &xt)?),
        DnCOutcome::Separator(_) | DnCOutcome::Failure { .. } => Decision::Infeasible,
        DnCOutcome::BudgetExceeded(_) => Decision::BudgetExceeded,
        DnCOutcome::TimedOut(_) => Decision::TimedOut,
    };
    report.trace.push(TraceEntry {
        iteration: 0,
        outcome: report.decision.label().to_string(),
        row: None,
        detail: format!("radius {r_hat}"),
    });
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `Ax = b, 0 ≤ x ≤ λ1`, promised infeasible or strictly feasible
/// (`0 < x < λ1`). Solved in the `2n`-variable standard form with
/// `r = λ√(2n)`; the returned point is the original `x`.
pub fn lfs_bounded(
    a: &Matrix,
    b: &[f64],
    lambda: f64,
    delta: f64,
    opts: &SolveOptions,
) -> Result<SolveReport, SolverError> {
    let n = a.ncols();
    let std = standardize_bounded(a, b, lambda)?;
    let input = LfsInput {
        a: std.a().clone(),
        b: std.b().to_vec(),
        r: lambda * ((2 * n) as f64).sqrt(),
        delta,
    };
    let mut report = lfs(&input, opts)?;
    report.algorithm = "lfs-bounded".into();
    if let Decision::Feasible(xy) = &report.decision {
        report.decision = Decision::Feasible(xy[..n].to_vec());
    }
    Ok(report)
}

/// [`lfs_bounded`] for a totally unimodular `A` (so `Δ = 1`).
pub fn lfs_tu(a: &Matrix, b: &[f64], lambda: f64, opts: &SolveOptions) -> Result<SolveReport, SolverError> {
    let mut report = lfs_bounded(a, b, lambda, 1.0, opts)?;
    report.algorithm = "lfs-tu".into();
    Ok(report)
}
