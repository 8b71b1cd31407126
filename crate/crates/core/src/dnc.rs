//! Divide-and-conquer search for an ε-approximate solution inside a ball.
//!
//! `dnc(sys, z, r)` either returns a point with `Ax = b, Cx ≤ d + ε1`, a valid
//! inequality separating `B(z, r)` from the feasible set, or fails with two
//! opposite separators. Radii shrink by `1 + θ` per level until the
//! elementary procedure applies.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::ep::{base_radius, elementary_procedure_with, EpError, EpOutcome};
use crate::linalg::{dot, norm, project_hyperplane, AffineProjector, LinalgError, TAU_ZERO};
use crate::model::{tau_cert, Certificate, Hyperplane, LinearSystem};

/// Default shrink parameter: radii drop by a factor 7/5 per level.
pub const THETA_DEFAULT: f64 = 0.4;

/// Two unit normals closer than this to `u₁ = −u₂` count as opposite.
pub const TAU_OPP: f64 = 1e-9;

/// `1 / log₂(7/5)`, the exponent of the leaf-count estimate.
pub fn k_exponent() -> f64 {
    1.0 / 1.4f64.log2()
}

#[derive(Clone, Debug)]
pub struct DnCParams {
    pub theta: f64,
    pub eps: f64,
    /// Maximum number of elementary-procedure calls; `None` means `⌈10K⌉`.
    pub node_budget: Option<u64>,
    pub deadline: Option<Instant>,
}

impl DnCParams {
    pub fn new(eps: f64) -> Self {
        DnCParams {
            theta: THETA_DEFAULT,
            eps,
            node_budget: None,
            deadline: None,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.node_budget = Some(budget);
        self
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    /// The explicit budget, or `⌈10K⌉` saturated to `u64::MAX`, at least 1.
    pub fn budget_for(&self, sys: &LinearSystem, r: f64) -> u64 {
        self.node_budget
            .unwrap_or_else(|| {
                let k = complexity_k(r, sys.c_max(), self.eps);
                let b = (10.0 * k).ceil();
                if b >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    b as u64
                }
            })
            .max(1)
    }
}

/// Smallest `D` with `r / (1+θ)^D ≤ ε / (2‖c_max‖)`.
pub fn leaf_depth(r: f64, c_max: f64, eps: f64, theta: f64) -> u32 {
    if c_max == 0.0 {
        return 0;
    }
    let base = eps / (2.0 * c_max);
    let mut d = 0u32;
    let mut cur = r;
    while cur > base {
        cur /= 1.0 + theta;
        d += 1;
    }
    d
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DnCCounters {
    /// Every invocation of the recursive search, leaves included.
    pub recursions: u64,
    pub ep_calls: u64,
    pub max_depth: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DnCOutcome {
    ApproxSolution(Vec<f64>),
    Separator(Hyperplane),
    /// Consecutive separators with `h₁ = −γh₂`.
    Failure {
        h1: Hyperplane,
        h2: Hyperplane,
        gamma: f64,
    },
    BudgetExceeded(DnCCounters),
    TimedOut(DnCCounters),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DnCRun {
    pub outcome: DnCOutcome,
    pub counters: DnCCounters,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DnCError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no convex combination reaches distance {r} (best {best} at α = {alpha})")]
    CombinationFailed { r: f64, best: f64, alpha: f64 },
    #[error(transparent)]
    Ep(#[from] EpError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub fn dnc(sys: &LinearSystem, z: &[f64], r: f64, params: &DnCParams) -> Result<DnCRun, DnCError> {
    let proj = AffineProjector::build(sys.a(), sys.b())?;
    dnc_with(sys, &proj, z, r, params)
}

pub fn dnc_with(
    sys: &LinearSystem,
    proj: &AffineProjector,
    z: &[f64],
    r: f64,
    params: &DnCParams,
) -> Result<DnCRun, DnCError> {
    if !(r > 0.0) || !(params.eps > 0.0) || !(params.theta > 0.0) {
        return Err(DnCError::InvalidParams(format!(
            "need r, ε, θ > 0 (got r = {r}, ε = {}, θ = {})",
            params.eps, params.theta
        )));
    }
    let mut search = Search {
        sys,
        proj,
        eps: params.eps,
        shrink: 1.0 + params.theta,
        base: base_radius(sys, params.eps),
        budget: params.budget_for(sys, r),
        deadline: params.deadline,
        counters: DnCCounters::default(),
    };
    let node = search.run(z, r, 0)?;
    let counters = search.counters;
    let outcome = match node {
        Node::Solution(x) => DnCOutcome::ApproxSolution(x),
        Node::Separator(hp) => DnCOutcome::Separator(hp),
        Node::Failure { h1, h2, gamma } => DnCOutcome::Failure { h1, h2, gamma },
        Node::Budget => DnCOutcome::BudgetExceeded(counters),
        Node::Timeout => DnCOutcome::TimedOut(counters),
    };
    Ok(DnCRun { outcome, counters })
}

enum Node {
    Solution(Vec<f64>),
    Separator(Hyperplane),
    Failure { h1: Hyperplane, h2: Hyperplane, gamma: f64 },
    Budget,
    Timeout,
}

struct Search<'a> {
    sys: &'a LinearSystem,
    proj: &'a AffineProjector,
    eps: f64,
    shrink: f64,
    base: f64,
    budget: u64,
    deadline: Option<Instant>,
    counters: DnCCounters,
}

impl Search<'_> {
    fn run(&mut self, z: &[f64], r: f64, depth: u32) -> Result<Node, DnCError> {
        self.counters.recursions += 1;
        self.counters.max_depth = self.counters.max_depth.max(depth);
        if self.counters.recursions.is_multiple_of(256) {
            if let Some(t) = self.deadline {
                if Instant::now() >= t {
                    return Ok(Node::Timeout);
                }
            }
        }

        if r <= self.base {
            if self.counters.ep_calls >= self.budget {
                return Ok(Node::Budget);
            }
            self.counters.ep_calls += 1;
            return Ok(match elementary_procedure_with(self.sys, self.proj, z, r, self.eps)? {
                EpOutcome::ApproxSolution(x) => Node::Solution(x),
                EpOutcome::Separator(hp) => Node::Separator(normalized(hp)),
            });
        }

        let r1 = r / self.shrink;
        let h1 = match self.run(z, r1, depth + 1)? {
            Node::Separator(hp) => hp,
            other => return Ok(other),
        };
        // h₁ alone already separates B(z, r): it is the α = 1 combination.
        // Projecting onto a far-away h₁ would also move the next center
        // arbitrarily far and wreck the precision of everything below it.
        if h1.signed_distance(z) >= r {
            return Ok(Node::Separator(h1));
        }
        let z0 = project_hyperplane(&h1.normal, h1.offset, z)?;
        let h2 = match self.run(&z0, r1, depth + 1)? {
            Node::Separator(hp) => hp,
            other => return Ok(other),
        };
        Ok(match combine_separators(&h1, &h2, z, r)? {
            Combination::Combined { hyperplane, .. } => Node::Separator(normalized(hyperplane)),
            Combination::Opposite { gamma } => Node::Failure { h1, h2, gamma },
        })
    }
}

/// Rescales a hyperplane and its certificate to a unit normal.
fn normalized(hp: Hyperplane) -> Hyperplane {
    let s = norm(&hp.normal);
    if s <= TAU_ZERO || s == 1.0 {
        return hp;
    }
    let inv = 1.0 / s;
    Hyperplane {
        normal: hp.normal.iter().map(|v| v * inv).collect(),
        offset: hp.offset * inv,
        cert: Certificate {
            eq_mults: hp.cert.eq_mults.iter().map(|v| v * inv).collect(),
            ineq_mults: hp.cert.ineq_mults.iter().map(|v| v * inv).collect(),
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Combination {
    Combined {
        hyperplane: Hyperplane,
        alpha: f64,
    },
    /// `h₁ = −γh₂` up to `τ_opp`.
    Opposite {
        gamma: f64,
    },
}

/// Picks `α ∈ [0, 1]` maximizing the distance from `z` to
/// `αh₁ + (1−α)h₂ ≤ αδ₁ + (1−α)δ₂` and requires it to reach `r`.
pub fn combine_separators(h1: &Hyperplane, h2: &Hyperplane, z: &[f64], r: f64) -> Result<Combination, DnCError> {
    let n1 = norm(&h1.normal);
    let n2 = norm(&h2.normal);
    if n1 <= TAU_ZERO || n2 <= TAU_ZERO {
        return Err(LinalgError::ZeroNormal.into());
    }
    let opp: f64 = h1
        .normal
        .iter()
        .zip(&h2.normal)
        .map(|(a, b)| (a / n1 + b / n2).powi(2))
        .sum::<f64>()
        .sqrt();
    if opp <= TAU_OPP {
        return Ok(Combination::Opposite { gamma: n1 / n2 });
    }

    // h(α) = h₂ + α·e and N(α) = a₂ + α·s are both affine in α, so the
    // stationary point of N/‖h‖ solves a linear equation.
    let e: Vec<f64> = h1.normal.iter().zip(&h2.normal).map(|(a, b)| a - b).collect();
    let q0 = n2 * n2;
    let q1 = dot(&h2.normal, &e);
    let q2 = dot(&e, &e);
    let a1 = dot(&h1.normal, z) - h1.offset;
    let a2 = dot(&h2.normal, z) - h2.offset;
    let s = a1 - a2;
    // ‖h(α)‖ from the vector itself: the quadratic form cancels badly when
    // the normals are nearly opposite.
    let value = |alpha: f64| {
        let q: f64 = h1
            .normal
            .iter()
            .zip(&h2.normal)
            .map(|(a, b)| (alpha * a + (1.0 - alpha) * b).powi(2))
            .sum();
        if q.sqrt() <= TAU_ZERO {
            f64::NEG_INFINITY
        } else {
            (a2 + alpha * s) / q.sqrt()
        }
    };
    let mut candidates = vec![1.0, 0.0];
    let den = s * q1 - a2 * q2;
    if den != 0.0 {
        let stat = (a2 * q1 - s * q0) / den;
        if stat > 0.0 && stat < 1.0 {
            candidates.push(stat);
        }
    }
    // Nearly opposite normals put a pole of N/‖h‖ at the α minimizing ‖h‖,
    // which the stationary point does not see.
    if q2 > 0.0 {
        let shortest = -q1 / q2;
        if shortest > 0.0 && shortest < 1.0 {
            candidates.push(shortest);
        }
    }
    let (alpha, best) = candidates
        .into_iter()
        .map(|a| (a, value(a)))
        .fold(
            (f64::NAN, f64::NEG_INFINITY),
            |acc, c| if c.1 > acc.1 { c } else { acc },
        );

    let hyperplane = Hyperplane {
        normal: h1
            .normal
            .iter()
            .zip(&h2.normal)
            .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
            .collect(),
        offset: alpha * h1.offset + (1.0 - alpha) * h2.offset,
        cert: h1.cert.convex(alpha, &h2.cert),
    };
    let tol = tau_cert(norm(&hyperplane.normal)) + 1e-12 * r;
    if !(best >= r - tol) {
        return Err(DnCError::CombinationFailed { r, best, alpha });
    }
    Ok(Combination::Combined { hyperplane, alpha })
}

/// Operation-count model for one search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexityEstimate {
    pub k: f64,
    pub mu: f64,
    pub rho: f64,
    pub nnz: usize,
    pub predicted_ops: f64,
}

/// `K = (r‖c_max‖/ε)^(1/log₂(7/5))`
pub fn complexity_k(r: f64, c_max: f64, eps: f64) -> f64 {
    (r * c_max / eps).powf(k_exponent())
}

pub fn complexity_estimate(sys: &LinearSystem, z: &[f64], r: f64, eps: f64) -> ComplexityEstimate {
    let n = sys.n() as f64;
    let m = sys.m() as f64;
    let c_max = sys.c_max();
    let k = complexity_k(r, c_max, eps);
    let mu = if c_max == 0.0 {
        f64::INFINITY
    } else {
        2.0 * eps / (28.0 * n * c_max * c_max)
    };
    let rho = center_scale(z);
    let nnz = sys.c().nonzeros();
    let log_k = k.max(1.0).log2();
    let inner = ((rho + log_k * (r + n * mu)) / mu).max(2.0).log2();
    let predicted_ops = m.powi(3) + m * m * n + n * n * m + k * (n * inner + n * n + nnz as f64);
    ComplexityEstimate {
        k,
        mu,
        rho,
        nnz,
        predicted_ops,
    }
}

/// A `ρ` with `|z_j| ≤ ρ` and `ρz_j` integral; finite floats are dyadic, so
/// a power of two clears all denominators.
fn center_scale(z: &[f64]) -> f64 {
    let zmax = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if zmax == 0.0 {
        return 0.0;
    }
    let mut q = 1.0f64;
    while q < 2f64.powi(1074) && z.iter().any(|v| (v * q).fract() != 0.0) {
        q *= 2.0;
    }
    q * zmax.ceil()
}
