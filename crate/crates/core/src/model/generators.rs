//! Seeded instance families.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{box_rows, Family, Instance, LinearSystem};
use crate::linalg::Matrix;

/// Random `Ax = b, 0 ≤ x ≤ 1`: between 1 and `n − 1` rows of i.i.d. 0/1
/// entries (all-zero rows redrawn), `b` uniform in `{1, …, n}`.
///
/// # Panics
/// If `n < 2`.
pub fn gen_random01(n: usize, seed: u64) -> Instance {
    assert!(n >= 2, "random 0-1 instances need n >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..n);
    let mut rows = Vec::with_capacity(m);
    while rows.len() < m {
        let row: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0u8..=1))).collect();
        if row.iter().any(|&v| v != 0.0) {
            rows.push(row);
        }
    }
    let b: Vec<f64> = (0..m).map(|_| rng.gen_range(1..=n) as f64).collect();
    let (c, d) = box_rows(n, 1.0);
    let system =
        LinearSystem::new(Matrix::from_rows(n, &rows).expect("width n"), b, c, d).expect("generated rows are nonzero");
    let mut meta = BTreeMap::new();
    meta.insert("n".into(), n.to_string());
    Instance {
        name: format!("random01-n{n}-s{seed}"),
        system,
        family: Family::Random01,
        seed,
        meta,
    }
}

/// Two-constraint wedge `x₁ ≥ 1 + 2^α·|x₂|` with apex `(1, 0)`.
///
/// The half-angle satisfies `tan = 2^(−α)`, so it halves (in tangent) with
/// each increment of `α`. Started from the origin, the classical relaxation
/// method bounces between the two faces and needs more steps as the wedge
/// narrows.
///
/// # Panics
/// If `alpha < 1`.
pub fn gen_wedge(alpha: u32) -> Instance {
    assert!(alpha >= 1, "wedge parameter must be at least 1");
    let s = 2f64.powi(alpha as i32);
    let system = LinearSystem::inequalities(2, &[vec![-1.0, s], vec![-1.0, -s]], &[-1.0, -1.0]).expect("nonzero rows");
    let mut meta = BTreeMap::new();
    meta.insert("alpha".into(), alpha.to_string());
    Instance {
        name: format!("wedge-a{alpha}"),
        system,
        family: Family::Wedge,
        seed: 0,
        meta,
    }
}
