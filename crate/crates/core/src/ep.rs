//! The elementary procedure: the base case of the divide-and-conquer search.
//!
//! For a ball `B(z, r)` small enough that `r ≤ ε / (2‖c_max‖)`, one
//! projection onto `{Ax = b}` and one pass over the inequality rows either
//! produce an ε-approximate solution or a hyperplane separating the ball
//! from the feasible set.

use thiserror::Error;

use crate::linalg::{distance, dot, sub, AffineProjector, LinalgError};
use crate::model::{Certificate, Hyperplane, LinearSystem};

#[derive(Clone, Debug, PartialEq)]
pub enum EpOutcome {
    /// `Ax* = b` and `Cx* ≤ d + ε1`.
    ApproxSolution(Vec<f64>),
    /// Valid for the feasible set and at distance at least `r` from `z`.
    Separator(Hyperplane),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EpError {
    #[error("radius {r} exceeds the base-case limit {limit}")]
    PreconditionViolated { r: f64, limit: f64 },
    #[error("center has {found} coordinates, system has {expected} variables")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `ε / (2‖c_max‖)`, infinite without inequalities.
pub fn base_radius(sys: &LinearSystem, eps: f64) -> f64 {
    let c_max = sys.c_max();
    if c_max == 0.0 {
        f64::INFINITY
    } else {
        eps / (2.0 * c_max)
    }
}

/// Runs the procedure, factoring `A·Aᵀ` on the spot.
pub fn elementary_procedure(sys: &LinearSystem, z: &[f64], r: f64, eps: f64) -> Result<EpOutcome, EpError> {
    let proj = AffineProjector::build(sys.a(), sys.b())?;
    elementary_procedure_with(sys, &proj, z, r, eps)
}

/// Same as [`elementary_procedure`] with a projector built once by the caller.
pub fn elementary_procedure_with(
    sys: &LinearSystem,
    proj: &AffineProjector,
    z: &[f64],
    r: f64,
    eps: f64,
) -> Result<EpOutcome, EpError> {
    if z.len() != sys.n() {
        return Err(EpError::DimensionMismatch {
            expected: sys.n(),
            found: z.len(),
        });
    }
    let limit = base_radius(sys, eps);
    if !(r > 0.0 && eps > 0.0 && r <= limit * (1.0 + 1e-12)) {
        return Err(EpError::PreconditionViolated { r, limit });
    }

    let (p, y) = proj.project_with_multipliers(z);
    if distance(&p, z) >= r {
        let h = sub(z, &p);
        let offset = dot(&h, &p);
        let mut cert = Certificate::zeros(sys.m(), sys.l());
        cert.eq_mults = y;
        return Ok(EpOutcome::Separator(Hyperplane {
            normal: h,
            offset,
            cert,
        }));
    }

    for (k, (row, &dk)) in sys.c().iter_rows().zip(sys.d()).enumerate() {
        let dist = (dot(row, z) - dk) / crate::linalg::norm(row);
        if dist >= r {
            return Ok(EpOutcome::Separator(Hyperplane {
                normal: row.to_vec(),
                offset: dk,
                cert: Certificate::unit_inequality(sys.m(), sys.l(), k),
            }));
        }
    }
    Ok(EpOutcome::ApproxSolution(p))
}
