//! Feasibility drivers built on the divide-and-conquer search.
//!
//! * [`lfs`], [`lfs_bounded`], [`lfs_tu`]: standard-form systems promised to
//!   be infeasible or strictly feasible, with a known subdeterminant bound.
//! * [`lfg`]: general integer systems via a small right-hand-side perturbation
//!   and rounding back onto the original constraints.
//! * [`chubanov_relaxation`]: repeatedly turns inequalities that every integer
//!   solution satisfies with equality into equalities.

mod chubanov;
mod lfg;
mod lfs;

pub use chubanov::chubanov_relaxation;
pub use lfg::{lfg, lfg_with, nu_log2, round_strict_solution, schrijver_log2_radius, LfgOptions, Rounding};
pub use lfs::{lfs, lfs_bounded, lfs_radius, lfs_tu, LfsInput};

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::dnc::{DnCCounters, DnCError, DnCParams};
use crate::inference::InferenceError;
use crate::linalg::{LinalgError, Matrix};
use crate::model::ModelError;

/// Version of the JSON report layout.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "x", rename_all = "snake_case")]
pub enum Decision {
    Feasible(Vec<f64>),
    Infeasible,
    NoIntegerSolutions,
    BudgetExceeded,
    TimedOut,
}

impl Decision {
    /// 0 feasible, 1 infeasible, 2 out of budget or time.
    pub fn exit_code(&self) -> i32 {
        match self {
            Decision::Feasible(_) => 0,
            Decision::Infeasible | Decision::NoIntegerSolutions => 1,
            Decision::BudgetExceeded | Decision::TimedOut => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Decision::Feasible(_) => "feasible",
            Decision::Infeasible => "infeasible",
            Decision::NoIntegerSolutions => "no-integer-solutions",
            Decision::BudgetExceeded => "budget-exceeded",
            Decision::TimedOut => "timed-out",
        }
    }

    pub fn point(&self) -> Option<&[f64]> {
        match self {
            Decision::Feasible(x) => Some(x),
            _ => None,
        }
    }
}

/// One search (or one relaxation step) of a driver.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub outcome: String,
    /// Inequality row acted on, indexed in the working system.
    pub row: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub schema: u32,
    pub algorithm: String,
    pub decision: Decision,
    pub recursions: u64,
    pub ep_calls: u64,
    /// Driver iterations: searches for the divide-and-conquer drivers,
    /// projection steps for the classical method.
    pub iterations: u64,
    pub max_depth: u32,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
    pub trace: Vec<TraceEntry>,
    pub notes: Vec<String>,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SolveReport {
    pub fn new(algorithm: &str) -> Self {
        SolveReport {
            schema: REPORT_SCHEMA,
            algorithm: algorithm.to_string(),
            decision: Decision::BudgetExceeded,
            recursions: 0,
            ep_calls: 0,
            iterations: 0,
            max_depth: 0,
            elapsed: Duration::ZERO,
            trace: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn absorb(&mut self, c: &DnCCounters) {
        self.recursions += c.recursions;
        self.ep_calls += c.ep_calls;
        self.max_depth = self.max_depth.max(c.max_depth);
        self.iterations += 1;
    }

    /// The report as JSON with the timing field zeroed, for reproducibility
    /// checks.
    pub fn to_json_without_timing(&self) -> String {
        let mut r = self.clone();
        r.elapsed = Duration::ZERO;
        serde_json::to_string(&r).expect("serializable")
    }
}

/// Settings shared by the divide-and-conquer drivers.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub theta: f64,
    /// Elementary-procedure calls allowed per search; `None` means `⌈10K⌉`.
    pub node_budget: Option<u64>,
    pub timeout: Option<Duration>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            theta: crate::dnc::THETA_DEFAULT,
            node_budget: None,
            timeout: None,
        }
    }
}

impl SolveOptions {
    pub(crate) fn params(&self, start: Instant) -> DnCParams {
        DnCParams {
            theta: self.theta,
            eps: 1.0,
            node_budget: self.node_budget,
            deadline: self.timeout.map(|t| start + t),
        }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("this algorithm needs integer data")]
    NonIntegral,
    #[error("search radius 2^{log2:.1} is too large to represent safely")]
    RadiusOverflow { log2: f64 },
    #[error("rounding failed: the tight-set point violates the system by {violation:e}")]
    RoundingFailed { violation: f64 },
    #[error("no inequality could be certified as an implied equality (iteration {iteration})")]
    HintRejected { iteration: usize, trace: Vec<TraceEntry> },
    #[error("recovered point violates the input by {violation:e}")]
    Unverified { violation: f64 },
    #[error("perturbation ν = 2^{nu_log2:.1} is lost in floating point")]
    NuUnderflow { nu_log2: f64 },
    #[error(transparent)]
    Dnc(#[from] DnCError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Hadamard-type bound `Δ_A ≤ n^{n/2}·|a_max|^n` on the largest absolute
/// subdeterminant, in log₂.
pub fn delta_bound_log2(a: &Matrix) -> f64 {
    let n = a.nrows().min(a.ncols()) as f64;
    let amax = a.max_abs();
    if n == 0.0 || amax == 0.0 {
        return 0.0;
    }
    0.5 * n * n.log2() + n * amax.log2()
}
