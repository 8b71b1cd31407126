use std::time::Instant;

use super::{Decision, SolveOptions, SolveReport, SolverError, TraceEntry};
use crate::dnc::{dnc, DnCOutcome};
use crate::inference::recover_solution;
use crate::linalg::{dot, norm, AffineProjector, Matrix, RowBasis};
use crate::model::{homogenize, strengthen, tau_cert, EqualityReduction, LinearSystem};

/// Radii beyond `2^300` are refused.
const MAX_LOG2_RADIUS: f64 = 300.0;

#[derive(Clone, Debug, Default)]
pub struct LfgOptions {
    /// Known bound on the norm of some solution, if the system is feasible.
    pub radius_override: Option<f64>,
    /// Starting perturbation; halved after each failed rounding, down to
    /// `2^{-2T}`.
    pub nu_override: Option<f64>,
    pub solve: SolveOptions,
}

/// `log₂ ν` for the default perturbation `ν = 2^{-2T}`, `T` the bit length.
pub fn nu_log2(sys: &LinearSystem) -> f64 {
    -2.0 * sys.bit_length() as f64
}

/// `log₂` of the vertex-norm bound `2^{5n²φ}·√n`.
pub fn schrijver_log2_radius(n: usize, phi: u64) -> f64 {
    let n = n.max(1) as f64;
    5.0 * n * n * phi as f64 + 0.5 * n.log2()
}

/// Result of [`round_strict_solution`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rounding {
    pub x: Vec<f64>,
    /// Inequalities made tight.
    pub tight: Vec<usize>,
    /// Whether `x` differs from the input point.
    pub altered: bool,
}

/// Moves a point of `{Ax = b, Cx < d + ν}` onto the original system.
///
/// The set of rows with `c_l·x ≥ d_l` is grown by ratio-test steps until
/// every other row lies in the span of the tight rows and the equalities;
/// the point is then projected onto those rows held with equality. For
/// integer data and `ν ≤ 2^{-2T}` the result satisfies `Cx ≤ d`; for larger
/// `ν` it may not, and the result is checked.
pub fn round_strict_solution(sys: &LinearSystem, x0: &[f64], nu: f64) -> Result<Rounding, SolverError> {
    let n = sys.n();
    if x0.len() != n {
        return Err(SolverError::InvalidInput(format!(
            "point has {} entries, expected {n}",
            x0.len()
        )));
    }
    if sys.is_satisfied_by(x0, tau_cert(norm(x0))) {
        return Ok(Rounding {
            x: x0.to_vec(),
            tight: Vec::new(),
            altered: false,
        });
    }
    let excess = sys.ineq_violation_max(x0);
    if excess >= nu * (1.0 + 1e-9) {
        return Err(SolverError::InvalidInput(format!(
            "point exceeds d + ν by {:e}",
            excess - nu
        )));
    }
    let c = sys.c();
    let d = sys.d();
    let near = |k: usize, x: &[f64]| dot(c.row(k), x) >= d[k] - 1e-9 * (1.0 + d[k].abs());
    let mut x = x0.to_vec();
    loop {
        let tight: Vec<usize> = (0..sys.l()).filter(|&k| near(k, &x)).collect();
        let mut basis = RowBasis::new();
        for r in sys.a().iter_rows() {
            basis.try_add(r, 1e-9);
        }
        for &k in &tight {
            basis.try_add(c.row(k), 1e-9);
        }
        let free = (0..sys.l()).find(|&k| !tight.contains(&k) && !basis.contains(c.row(k), 1e-9));
        let Some(k) = free else {
            let x = project_tight(sys, &tight, &x)?;
            let violation = sys.ineq_violation_max(&x).max(sys.eq_residual_inf(&x) - sys.tau_lin());
            if violation > tau_cert(norm(&x)) {
                return Err(SolverError::RoundingFailed { violation });
            }
            return Ok(Rounding {
                x,
                tight,
                altered: true,
            });
        };
        // direction orthogonal to the current tight span with c_k·dir = 1
        let res = basis.residual(c.row(k));
        let dir: Vec<f64> = res.iter().map(|v| v / dot(c.row(k), &res)).collect();
        let mut step = f64::INFINITY;
        for j in (0..sys.l()).filter(|j| !tight.contains(j)) {
            let rate = dot(c.row(j), &dir);
            if rate > 1e-12 {
                step = step.min((d[j] - dot(c.row(j), &x)) / rate);
            }
        }
        for (xi, di) in x.iter_mut().zip(&dir) {
            *xi += step * di;
        }
    }
}

fn project_tight(sys: &LinearSystem, tight: &[usize], x: &[f64]) -> Result<Vec<f64>, SolverError> {
    let mut a = sys.a().clone();
    let mut b = sys.b().to_vec();
    for &k in tight {
        a.push_row(sys.c().row(k))?;
        b.push(sys.d()[k]);
    }
    let eqs = LinearSystem::new(a, b, Matrix::empty(sys.n()), Vec::new())?;
    match eqs.reduce_equalities() {
        EqualityReduction::Reduced(r) if r.m() == 0 => Ok(x.to_vec()),
        EqualityReduction::Reduced(r) => Ok(AffineProjector::build(r.a(), r.b())?.project(x)),
        EqualityReduction::Inconsistent { .. } => Err(SolverError::RoundingFailed {
            violation: f64::INFINITY,
        }),
    }
}

/// [`lfg_with`] with default search settings.
pub fn lfg(
    sys: &LinearSystem,
    radius_override: Option<f64>,
    nu_override: Option<f64>,
) -> Result<SolveReport, SolverError> {
    lfg_with(
        sys,
        &LfgOptions {
            radius_override,
            nu_override,
            solve: SolveOptions::default(),
        },
    )
}

/// Decides an integer system `Ax = b, Cx ≤ d`.
///
/// Searches `Ax = b, Cx ≤ d + ν/2` strengthened and homogenized, over a
/// ball large enough to contain a solution if one exists. A separator or
/// failure proves the perturbed system (hence the original) infeasible; a
/// solution is rounded back with [`round_strict_solution`]. If rounding
/// fails, `ν` is halved and the search repeated.
pub fn lfg_with(sys: &LinearSystem, opts: &LfgOptions) -> Result<SolveReport, SolverError> {
    let start = Instant::now();
    let mut report = SolveReport::new("lfg");
    if !sys.is_integral() {
        return Err(SolverError::NonIntegral);
    }
    let sys = match sys.reduce_equalities() {
        EqualityReduction::Reduced(s) => s,
        EqualityReduction::Inconsistent { row } => {
            report.decision = Decision::Infeasible;
            report.notes.push(format!("equality row {row} contradicts the others"));
            report.elapsed = start.elapsed();
            return Ok(report);
        }
    };
    let n = sys.n();
    let log2_r = match opts.radius_override {
        Some(r) if r > 0.0 && r.is_finite() => r.log2(),
        Some(r) => {
            return Err(SolverError::InvalidInput(format!(
                "radius override must be positive, got {r}"
            )))
        }
        None => schrijver_log2_radius(n, sys.facet_complexity()),
    };
    // log₂ √(R² + 1)
    let log2_lift = if log2_r > 30.0 {
        log2_r
    } else {
        0.5 * (4f64.powf(log2_r) + 1.0).log2()
    };
    let nu_floor = nu_log2(&sys);
    let mut nu_log = match opts.nu_override {
        Some(nu) if nu > 0.0 && nu.is_finite() => nu.log2(),
        Some(nu) => return Err(SolverError::InvalidInput(format!("ν must be positive, got {nu}"))),
        None => nu_floor,
    };
    let d_scale = 1.0 + sys.d().iter().fold(0.0f64, |m, v| m.max(v.abs()));

    for iteration in 0.. {
        let eta_log = (nu_log - 1.0).min(-1.0);
        let radius_log = log2_lift - eta_log + 1e-6f64.ln_1p() / std::f64::consts::LN_2;
        if radius_log > MAX_LOG2_RADIUS {
            return Err(SolverError::RadiusOverflow { log2: radius_log });
        }
        let nu = nu_log.exp2();
        if nu / 2.0 <= 1e-9 * d_scale {
            return Err(SolverError::NuUnderflow { nu_log2: nu_log });
        }
        let radius = radius_log.exp2();
        let perturbed = sys.with_shifted_rhs(nu / 2.0);
        let lifted = strengthen(&homogenize(&perturbed), 1.0)?;
        let run = dnc(&lifted, &vec![0.0; n + 1], radius, &opts.solve.params(start))?;
        report.absorb(&run.counters);
        let detail = format!("ν = 2^{nu_log:.1}, radius 2^{radius_log:.2}");
        let (decision, label) = match run.outcome {
            DnCOutcome::ApproxSolution(xt) => {
                let x0 = recover_solution(&perturbed, &xt)?;
                match round_strict_solution(&sys, &x0, nu) {
                    Ok(r) => {
                        if r.altered {
                            report.notes.push(format!("rounded onto {} tight rows", r.tight.len()));
                        }
                        (Some(Decision::Feasible(r.x)), "solution")
                    }
                    Err(SolverError::RoundingFailed { violation }) => {
                        if nu_log <= nu_floor {
                            return Err(SolverError::RoundingFailed { violation });
                        }
                        (None, "rounding-failed")
                    }
                    Err(e) => return Err(e),
                }
            }
            DnCOutcome::Separator(_) => (Some(Decision::Infeasible), "separator"),
            DnCOutcome::Failure { .. } => (Some(Decision::Infeasible), "failure"),
            DnCOutcome::BudgetExceeded(_) => (Some(Decision::BudgetExceeded), "budget-exceeded"),
            DnCOutcome::TimedOut(_) => (Some(Decision::TimedOut), "timed-out"),
        };
        report.trace.push(TraceEntry {
            iteration,
            outcome: label.into(),
            row: None,
            detail,
        });
        if let Some(decision) = decision {
            report.decision = decision;
            break;
        }
        nu_log = (nu_log - 1.0).max(nu_floor);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}
