//! What a divide-and-conquer outcome on the strengthened homogenized system
//! `Ax − bt = 0, Cx − dt ≤ −1, −t ≤ −2` says about `Ax = b, Cx ≤ d`.
//!
//! Run from `z = 0` with `r ≥ 2l(r* + 1)`, where `r*` bounds every feasible
//! `x`, the three outcomes mean:
//!
//! * an ε-approximate solution `(x*, t*)` is exact, and `x*/t*` solves the
//!   original system;
//! * a failure means some inequality holds with equality on all of `P`;
//! * a separator means some inequality holds with equality at every integer
//!   point of `P` (all of `P` lies in the strip `d_l − 1/2 ≤ c_l·x ≤ d_l`).
//!
//! The certificate attached to a separator makes the last two claims
//! checkable. With multipliers `α` on the original inequalities, `β` on the
//! `t` row and `H = ‖h‖`, every `x ∈ P` satisfies
//! `α_k·(d_k − c_k·x) ≤ H·√(r*² + 1) − β`, which bounds each row's slack.

use thiserror::Error;

use crate::dnc::DnCOutcome;
use crate::linalg::norm;
use crate::model::{homogenize, strengthen, tau_cert, Certificate, LinearSystem};
use crate::oracle::{oracle_feasible, satisfies, OracleError};

#[derive(Clone, Debug, PartialEq)]
pub enum Conclusion {
    ExactSolution(Vec<f64>),
    Infeasible,
    ImpliedEqualityExists,
    IntegerImpliedEqualityExists {
        /// Row with the largest certificate multiplier. Unverified.
        index_hint: Option<usize>,
        /// Rows whose multiplier exceeds half the largest.
        candidates: Vec<usize>,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InferenceError {
    #[error("radius {r_used} is below 2l(r* + 1) = {required}")]
    BadRadius { r_used: f64, required: f64 },
    #[error("the search stopped before reaching a conclusion")]
    Inconclusive,
    #[error("recovered point violates the original system by {violation:e}")]
    SolutionRejected { violation: f64 },
    #[error("recovered point has t = {0}, not positive")]
    NonPositiveScale(f64),
}

/// The radius `2l(r* + 1)` needed for the thin-strip conclusion.
pub fn strip_radius(l: usize, r_star: f64) -> f64 {
    2.0 * l as f64 * (r_star + 1.0)
}

/// Maps an outcome of `dnc(strengthen(homogenize(sys), 1), 0, r_used)` to a
/// conclusion about `sys`.
pub fn interpret(
    sys: &LinearSystem,
    outcome: &DnCOutcome,
    r_used: f64,
    r_star: f64,
) -> Result<Conclusion, InferenceError> {
    let required = strip_radius(sys.l(), r_star);
    if r_used < required - tau_cert(required) {
        return Err(InferenceError::BadRadius { r_used, required });
    }
    match outcome {
        DnCOutcome::ApproxSolution(xt) => recover_solution(sys, xt).map(Conclusion::ExactSolution),
        DnCOutcome::Failure { .. } => Ok(Conclusion::ImpliedEqualityExists),
        DnCOutcome::Separator(hp) => {
            let (index_hint, candidates) = multiplier_hint(&hp.cert.ineq_mults[..sys.l()]);
            Ok(Conclusion::IntegerImpliedEqualityExists { index_hint, candidates })
        }
        DnCOutcome::BudgetExceeded(_) | DnCOutcome::TimedOut(_) => Err(InferenceError::Inconclusive),
    }
}

/// `x*/t*`, checked against `sys` with slack `τ_cert`.
pub fn recover_solution(sys: &LinearSystem, xt: &[f64]) -> Result<Vec<f64>, InferenceError> {
    let n = sys.n();
    let t = xt[n];
    if !(t > 0.0) {
        return Err(InferenceError::NonPositiveScale(t));
    }
    let x: Vec<f64> = xt[..n].iter().map(|v| v / t).collect();
    let tol = tau_cert(norm(&x));
    let violation = sys.ineq_violation_max(&x).max(sys.eq_residual_inf(&x) - sys.tau_lin());
    if violation > tol {
        return Err(InferenceError::SolutionRejected { violation });
    }
    Ok(x)
}

/// Argmax of the multipliers, plus every row above half the maximum.
pub fn multiplier_hint(alpha: &[f64]) -> (Option<usize>, Vec<usize>) {
    let best = alpha
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0.0)
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)));
    match best {
        None => (None, Vec::new()),
        Some((k, &amax)) => {
            let cands = alpha
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > amax / 2.0)
                .map(|(i, _)| i)
                .collect();
            (Some(k), cands)
        }
    }
}

/// Slack bounds implied by a certificate over the strengthened system.
#[derive(Clone, Debug, PartialEq)]
pub struct SlackBounds {
    /// `H·√(r*² + 1) − β`; negative means `P` is empty.
    pub budget: f64,
    /// Upper bound on `d_k − c_k·x` over `P`, per original inequality.
    pub per_row: Vec<f64>,
}

impl SlackBounds {
    pub fn proves_empty(&self) -> bool {
        self.budget < 0.0
    }

    /// Rows whose slack is provably at most `width` (a small allowance for
    /// rounding is added), tightest bound first.
    pub fn rows_within(&self, width: f64) -> Vec<usize> {
        let mut rows: Vec<usize> = (0..self.per_row.len())
            .filter(|&k| self.per_row[k] <= width + 1e-9 * (1.0 + width))
            .collect();
        rows.sort_by(|&a, &b| self.per_row[a].total_cmp(&self.per_row[b]).then(a.cmp(&b)));
        rows
    }
}

/// Evaluates the slack bounds of `cert`, a certificate over
/// `strengthen(homogenize(sys), ε)` for any `ε`.
pub fn slack_bounds(sys: &LinearSystem, lifted: &LinearSystem, cert: &Certificate, r_star: f64) -> SlackBounds {
    let (h, _) = cert.reconstruct(lifted);
    let beta = cert.homogenization_mult(lifted).unwrap_or(0.0).max(0.0);
    let budget = norm(&h) * (r_star * r_star + 1.0).sqrt() - beta;
    let per_row = cert.ineq_mults[..sys.l()]
        .iter()
        .map(|&a| if a > 0.0 { budget.max(0.0) / a } else { f64::INFINITY })
        .collect();
    SlackBounds { budget, per_row }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EqualityForcing {
    /// A point `(x*, t*)` of the strengthened system.
    StrengthenedFeasible(Vec<f64>),
    StrengthenedInfeasible,
}

/// Decides the strengthened system by brute force. When it is feasible the
/// witness is assembled the constructive way: average one strictly slack
/// point per inequality into `x̄`, take `η = min(1/2, min_k (d_k − c_k·x̄))`
/// and return `(x̄/η, 1/η)`.
pub fn check_equality_forcing(sys: &LinearSystem) -> Result<EqualityForcing, OracleError> {
    let lifted = strengthen(&homogenize(sys), 1.0).expect("homogenized");
    let direct = oracle_feasible(&lifted)?;
    if !direct.feasible {
        return Ok(EqualityForcing::StrengthenedInfeasible);
    }
    let verdict = oracle_feasible(sys)?;
    let vertices = verdict.vertices.unwrap_or_default();
    let slack = |x: &[f64], k: usize| sys.d()[k] - crate::linalg::dot(sys.c().row(k), x);
    let mut witnesses = Vec::with_capacity(sys.l());
    for k in 0..sys.l() {
        match vertices.iter().max_by(|a, b| slack(a, k).total_cmp(&slack(b, k))) {
            Some(v) if slack(v, k) > 0.0 => witnesses.push(v.clone()),
            // strict slack only along a ray: fall back to the direct witness
            _ => return Ok(EqualityForcing::StrengthenedFeasible(direct.witness.expect("feasible"))),
        }
    }
    if witnesses.is_empty() {
        witnesses.extend(verdict.witness);
    }
    let n = sys.n();
    let mut xbar = vec![0.0; n];
    for w in &witnesses {
        for (a, v) in xbar.iter_mut().zip(w) {
            *a += v / witnesses.len() as f64;
        }
    }
    let eta = (0..sys.l()).map(|k| slack(&xbar, k)).fold(0.5, f64::min);
    let mut out: Vec<f64> = xbar.iter().map(|v| v / eta).collect();
    out.push(1.0 / eta);
    if satisfies(&lifted, &out) {
        Ok(EqualityForcing::StrengthenedFeasible(out))
    } else {
        Ok(EqualityForcing::StrengthenedFeasible(direct.witness.expect("feasible")))
    }
}
