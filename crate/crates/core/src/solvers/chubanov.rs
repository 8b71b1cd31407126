use std::time::Instant;

use super::{Decision, SolveOptions, SolveReport, SolverError, TraceEntry};
use crate::dnc::{dnc, DnCOutcome};
use crate::inference::{multiplier_hint, recover_solution, slack_bounds, strip_radius};
use crate::linalg::{norm, AffineProjector, RowBasis};
use crate::model::{homogenize, strengthen, tau_cert, EqualityReduction, LinearSystem};

/// Decides whether an integer system has an integer-compatible solution
/// within `B(0, r*)`, relaxing one inequality to an equality per search.
///
/// Each search runs on the strengthened homogenization of the current
/// system with radius `2l(r* + 1)`. A solution ends the loop. Otherwise the
/// certificate bounds the slack of every inequality over solutions of norm
/// at most `r*`; a bound below `1/2` forces that row to hold with equality
/// at every integer solution, so the row becomes an equality. A negative
/// slack budget proves there is nothing left to find.
///
/// `Feasible` carries a rational solution of the original system (the
/// relaxation preserves every integer solution, not every real one).
pub fn chubanov_relaxation(sys: &LinearSystem, r_star: f64, opts: &SolveOptions) -> Result<SolveReport, SolverError> {
    let start = Instant::now();
    let mut report = SolveReport::new("chubanov");
    if !sys.is_integral() {
        return Err(SolverError::NonIntegral);
    }
    if !(r_star > 0.0) {
        return Err(SolverError::InvalidInput(format!("r* must be positive, got {r_star}")));
    }
    let n = sys.n();
    let mut cur = sys.clone();
    for iteration in 0.. {
        cur = match cur.reduce_equalities() {
            EqualityReduction::Reduced(s) => s,
            EqualityReduction::Inconsistent { row } => {
                report
                    .trace
                    .push(entry(iteration, "inconsistent", Some(row), "equalities contradict"));
                report.decision = Decision::NoIntegerSolutions;
                break;
            }
        };
        if cur.m() == n || cur.l() == 0 {
            // the equalities alone decide it
            let x = if cur.m() == 0 {
                vec![0.0; n]
            } else {
                AffineProjector::build(cur.a(), cur.b())?.project(&vec![0.0; n])
            };
            let ok = sys.is_satisfied_by(&x, tau_cert(norm(&x)));
            report
                .trace
                .push(entry(iteration, "determined", None, &format!("rank {}", cur.m())));
            report.decision = if ok {
                Decision::Feasible(x)
            } else {
                Decision::NoIntegerSolutions
            };
            break;
        }

        let lifted = strengthen(&homogenize(&cur), 1.0)?;
        let radius = strip_radius(cur.l(), r_star);
        let run = dnc(&lifted, &vec![0.0; n + 1], radius, &opts.params(start))?;
        report.absorb(&run.counters);
        let cert = match run.outcome {
            DnCOutcome::ApproxSolution(xt) => {
                let x = recover_solution(&cur, &xt)?;
                let violation = sys.ineq_violation_max(&x).max(sys.eq_residual_inf(&x) - sys.tau_lin());
                if violation > tau_cert(norm(&x)) {
                    return Err(SolverError::Unverified { violation });
                }
                report.trace.push(entry(iteration, "solution", None, ""));
                report.decision = Decision::Feasible(x);
                break;
            }
            DnCOutcome::Separator(hp) => hp.cert,
            DnCOutcome::Failure { h1, h2, gamma } => h1.cert.add_scaled(gamma, &h2.cert),
            DnCOutcome::BudgetExceeded(_) => {
                report.decision = Decision::BudgetExceeded;
                break;
            }
            DnCOutcome::TimedOut(_) => {
                report.decision = Decision::TimedOut;
                break;
            }
        };

        let bounds = slack_bounds(&cur, &lifted, &cert, r_star);
        if bounds.proves_empty() {
            report.trace.push(entry(
                iteration,
                "empty",
                None,
                &format!("slack budget {:.3e}", bounds.budget),
            ));
            report.decision = Decision::NoIntegerSolutions;
            break;
        }
        let rows = bounds.rows_within(0.5);
        let (hint, _) = multiplier_hint(&cert.ineq_mults[..cur.l()]);
        let k = match hint.filter(|h| rows.contains(h)).or_else(|| rows.first().copied()) {
            Some(k) => k,
            None => {
                report
                    .trace
                    .push(entry(iteration, "no-thin-row", hint, "no slack bound below 1/2"));
                return Err(SolverError::HintRejected {
                    iteration,
                    trace: report.trace,
                });
            }
        };
        let detail = format!("slack ≤ {:.3e}", bounds.per_row[k]);
        match classify_row(&cur, k) {
            RowStatus::Contradicts => {
                report.trace.push(entry(iteration, "contradiction", Some(k), &detail));
                report.decision = Decision::NoIntegerSolutions;
                break;
            }
            RowStatus::Implied => {
                report.trace.push(entry(iteration, "redundant", Some(k), &detail));
                cur.remove_inequality(k);
            }
            RowStatus::New => {
                report.trace.push(entry(iteration, "relaxed", Some(k), &detail));
                cur.move_to_equalities(k);
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

enum RowStatus {
    New,
    Implied,
    Contradicts,
}

/// How `c_k·x = d_k` relates to the equalities already present.
fn classify_row(sys: &LinearSystem, k: usize) -> RowStatus {
    const REL_TOL: f64 = 1e-9;
    let mut rows = RowBasis::new();
    let mut aug = RowBasis::new();
    for (r, &b) in sys.a().iter_rows().zip(sys.b()) {
        rows.try_add(r, REL_TOL);
        let mut v = r.to_vec();
        v.push(b);
        aug.try_add(&v, REL_TOL);
    }
    let c = sys.c().row(k);
    let mut v = c.to_vec();
    v.push(sys.d()[k]);
    if !rows.contains(c, REL_TOL) {
        RowStatus::New
    } else if aug.contains(&v, REL_TOL) {
        RowStatus::Implied
    } else {
        RowStatus::Contradicts
    }
}

fn entry(iteration: usize, outcome: &str, row: Option<usize>, detail: &str) -> TraceEntry {
    TraceEntry {
        iteration,
        outcome: outcome.into(),
        row,
        detail: detail.into(),
    }
}
