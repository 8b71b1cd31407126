//! Brute-force ground truth for small systems.
//!
//! Feasibility is decided by enumerating basic solutions: every vertex of a
//! pointed polyhedron is the unique solution of the equalities plus some
//! choice of tight inequality rows. Lineality directions are removed first by
//! adding `v·x = 0` for a basis `v` of `null([A; C])`, which keeps the
//! polyhedron nonempty iff the original is. Elimination runs over exact
//! rationals and drops to `f64` only when 128-bit arithmetic overflows.

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Zero};
use thiserror::Error;

use crate::linalg::dot;
use crate::model::{homogenize, strengthen, LinearSystem};

pub const TAU_ORACLE: f64 = 1e-9;

/// Largest `n` accepted by the vertex enumeration.
pub const MAX_CONTINUOUS_DIM: usize = 14;
/// Largest `n` accepted by the 0-1 enumeration.
pub const MAX_BINARY_DIM: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("oracle limit exceeded: {what} is {value}, limit {limit}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("variable {0} lacks the bounds 0 ≤ x ≤ 1")]
    MissingBounds(usize),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleVerdict {
    pub feasible: bool,
    pub witness: Option<Vec<f64>>,
    pub vertices: Option<Vec<Vec<f64>>>,
    pub strictly_feasible: Option<bool>,
    pub integer_feasible: Option<bool>,
}

/// Decides feasibility and lists the vertices of `P` (after removing any
/// lineality space).
pub fn oracle_feasible(sys: &LinearSystem) -> Result<OracleVerdict, OracleError> {
    check_dim(sys.n(), MAX_CONTINUOUS_DIM, "n")?;
    let vertices = match enumerate::<Q>(sys) {
        Some(v) => v,
        None => enumerate::<f64>(sys).expect("float elimination never overflows"),
    };
    Ok(OracleVerdict {
        feasible: !vertices.is_empty(),
        witness: vertices.first().cloned(),
        vertices: Some(vertices),
        strictly_feasible: None,
        integer_feasible: None,
    })
}

/// [`oracle_feasible`] plus strict feasibility and, for 0-1 bounded systems,
/// integer feasibility.
pub fn oracle_analyze(sys: &LinearSystem) -> Result<OracleVerdict, OracleError> {
    let mut v = oracle_feasible(sys)?;
    v.strictly_feasible = Some(v.feasible && strictly_feasible(sys)?);
    v.integer_feasible = match oracle_integer01(sys) {
        Ok(b) => Some(b),
        Err(OracleError::MissingBounds(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(v)
}

/// Whether some `x` has `Ax = b` and `Cx < d`.
///
/// Equivalent to feasibility of `Ax − bt = 0, Cx − dt ≤ −1, −t ≤ −2`: scale a
/// strictly feasible point by the inverse of a small enough common slack.
pub fn strictly_feasible(sys: &LinearSystem) -> Result<bool, OracleError> {
    check_dim(sys.n() + 1, MAX_CONTINUOUS_DIM, "n + 1")?;
    let s = strengthen(&homogenize(sys), 1.0).expect("homogenized");
    Ok(oracle_feasible(&s)?.feasible)
}

/// Exhaustive check of all `2ⁿ` binary vectors.
pub fn oracle_integer01(sys: &LinearSystem) -> Result<bool, OracleError> {
    let n = sys.n();
    check_dim(n, MAX_BINARY_DIM, "n")?;
    if let Some(j) = (0..n).find(|&j| !has_unit_bounds(sys, j)) {
        return Err(OracleError::MissingBounds(j));
    }
    let x_of = |mask: u64| -> Vec<f64> { (0..n).map(|j| ((mask >> j) & 1) as f64).collect() };
    if sys.is_integral() {
        let to_i = |v: f64| v as i128;
        let eq: Vec<(Vec<i128>, i128)> = sys
            .a()
            .iter_rows()
            .zip(sys.b())
            .map(|(r, &b)| (r.iter().map(|&v| to_i(v)).collect(), to_i(b)))
            .collect();
        let ineq: Vec<(Vec<i128>, i128)> = sys
            .c()
            .iter_rows()
            .zip(sys.d())
            .map(|(r, &d)| (r.iter().map(|&v| to_i(v)).collect(), to_i(d)))
            .collect();
        let eval = |r: &[i128], mask: u64| -> i128 { (0..n).filter(|j| (mask >> j) & 1 == 1).map(|j| r[j]).sum() };
        Ok((0..1u64 << n)
            .any(|mask| eq.iter().all(|(r, b)| eval(r, mask) == *b) && ineq.iter().all(|(r, d)| eval(r, mask) <= *d)))
    } else {
        Ok((0..1u64 << n).any(|mask| sys.is_satisfied_by(&x_of(mask), TAU_ORACLE)))
    }
}

/// For `Ax = b, x ≥ 0` with bounded feasible set: the average of the
/// vertices maximizing each coordinate, when it is strictly positive.
pub fn oracle_strict(sys_standard: &LinearSystem) -> Result<Option<Vec<f64>>, OracleError> {
    let verdict = oracle_feasible(sys_standard)?;
    let vertices = verdict.vertices.unwrap_or_default();
    if vertices.is_empty() {
        return Ok(None);
    }
    let n = sys_standard.n();
    let mut avg = vec![0.0; n];
    for i in 0..n {
        let best = vertices.iter().max_by(|a, b| a[i].total_cmp(&b[i])).expect("nonempty");
        for (a, v) in avg.iter_mut().zip(best) {
            *a += v / n as f64;
        }
    }
    Ok(avg.iter().all(|&v| v > TAU_ORACLE).then_some(avg))
}

fn check_dim(value: usize, limit: usize, what: &'static str) -> Result<(), OracleError> {
    if value > limit {
        Err(OracleError::LimitExceeded { what, value, limit })
    } else {
        Ok(())
    }
}

fn has_unit_bounds(sys: &LinearSystem, j: usize) -> bool {
    let is_unit = |r: &[f64], sign: f64| {
        r.iter()
            .enumerate()
            .all(|(i, &v)| if i == j { v == sign } else { v == 0.0 })
    };
    let rows: Vec<(&[f64], f64)> = sys.c().iter_rows().zip(sys.d().iter().copied()).collect();
    rows.iter().any(|(r, d)| is_unit(r, 1.0) && *d <= 1.0) && rows.iter().any(|(r, d)| is_unit(r, -1.0) && *d <= 0.0)
}

type Q = Ratio<i128>;

/// Field operations used by the elimination; `None` signals overflow.
trait Scalar: Clone + PartialEq {
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    /// Pivot preference.
    fn magnitude(&self) -> f64;
    /// `lhs ≤ rhs` up to this type's tolerance.
    fn le(lhs: &Self, rhs: &Self) -> bool;
}

impl Scalar for Q {
    fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(<Q as Zero>::zero());
        }
        // f64 values are dyadic: mantissa · 2^exp exactly
        let bits = v.to_bits();
        let sign: i128 = if bits >> 63 == 0 { 1 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & ((1u64 << 52) - 1)) as i128;
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1i128 << 52), raw_exp - 1075)
        };
        if exp >= 0 {
            if exp > 70 {
                return None;
            }
            Some(Q::from_integer(sign * (mant << exp)))
        } else {
            let tz = (mant.trailing_zeros() as i32).min(-exp);
            let (mant, shift) = (mant >> tz, -exp - tz);
            if shift > 120 {
                return None;
            }
            Some(Q::new(sign * mant, 1i128 << shift))
        }
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn zero() -> Self {
        <Q as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn le(lhs: &Self, rhs: &Self) -> bool {
        lhs <= rhs
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Option<Self> {
        Some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn zero() -> Self {
        0.0
    }
    fn is_zero(&self) -> bool {
        self.abs() <= 1e-11
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn le(lhs: &Self, rhs: &Self) -> bool {
        *lhs <= rhs + TAU_ORACLE * (1.0 + rhs.abs())
    }
}

/// Reduced row echelon form of `rows` over the first `cols` columns.
/// Returns the nonzero rows and their pivot columns.
fn rref<S: Scalar>(mut rows: Vec<Vec<S>>, cols: usize) -> Option<(Vec<Vec<S>>, Vec<usize>)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .max_by(|&i, &j| rows[i][c].magnitude().total_cmp(&rows[j][c].magnitude()))
        else {
            continue;
        };
        rows.swap(r, p);
        let pv = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = v.div(&pv)?;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in 0..rows[i].len() {
                let delta = f.mul(&rows[r][j])?;
                rows[i][j] = rows[i][j].sub(&delta)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Some((rows, pivots))
}

enum Solved<S> {
    Unique(Vec<S>),
    Inconsistent,
    Underdetermined,
}

/// Solves the augmented system `rows = [M | rhs]` in `n` unknowns.
fn solve_augmented<S: Scalar>(rows: Vec<Vec<S>>, n: usize) -> Option<Solved<S>> {
    let (red, pivots) = rref(rows, n + 1)?;
    if pivots.last() == Some(&n) {
        return Some(Solved::Inconsistent);
    }
    if pivots.len() < n {
        return Some(Solved::Underdetermined);
    }
    Some(Solved::Unique(red.into_iter().map(|r| r[n].clone()).collect()))
}

fn convert<S: Scalar>(m: &crate::linalg::Matrix, rhs: &[f64]) -> Option<Vec<Vec<S>>> {
    m.iter_rows()
        .zip(rhs)
        .map(|(r, &v)| r.iter().chain(std::iter::once(&v)).map(|&x| S::from_f64(x)).collect())
        .collect()
}

/// All vertices of `P ∩ lineality⊥`, deduplicated; `None` on overflow.
fn enumerate<S: Scalar>(sys: &LinearSystem) -> Option<Vec<Vec<f64>>> {
    let n = sys.n();
    let eq = convert::<S>(sys.a(), sys.b())?;
    let ineq = convert::<S>(sys.c(), sys.d())?;

    // null space of [A; C] spans the lineality space
    let coeffs: Vec<Vec<S>> = eq.iter().chain(&ineq).map(|r| r[..n].to_vec()).collect();
    let (red, pivots) = rref(coeffs, n)?;
    let mut equalities = eq;
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); n + 1];
        v[free] = S::from_f64(1.0)?;
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = S::zero().sub(&row[free])?;
        }
        equalities.push(v);
    }

    let (eq_red, eq_piv) = rref(equalities, n + 1)?;
    if eq_piv.last() == Some(&n) {
        return Some(Vec::new());
    }
    let k = n - eq_piv.len();
    let satisfies = |x: &[S]| -> Option<bool> {
        for row in &ineq {
            let mut s = S::zero();
            for (a, xi) in row[..n].iter().zip(x) {
                s = s.add(&a.mul(xi)?)?;
            }
            if !S::le(&s, &row[n]) {
                return Some(false);
            }
        }
        Some(true)
    };

    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut push = |x: Vec<S>| {
        let xf: Vec<f64> = x.iter().map(Scalar::to_f64).collect();
        if !out
            .iter()
            .any(|v| v.iter().zip(&xf).all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + a.abs())))
        {
            out.push(xf);
        }
    };
    let mut subset: Vec<usize> = (0..k).collect();
    if k > ineq.len() {
        return Some(Vec::new());
    }
    loop {
        let mut rows = eq_red.clone();
        rows.extend(subset.iter().map(|&i| ineq[i].clone()));
        if let Solved::Unique(x) = solve_augmented(rows, n)? {
            if satisfies(&x)? {
                push(x);
            }
        }
        if !next_subset(&mut subset, ineq.len()) {
            break;
        }
    }
    Some(out)
}

/// Advances a sorted `k`-subset of `0..len` in lexicographic order.
fn next_subset(s: &mut [usize], len: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < len - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Checks `x` against `sys` with the oracle tolerance.
pub fn satisfies(sys: &LinearSystem, x: &[f64]) -> bool {
    let scale = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    sys.a()
        .iter_rows()
        .zip(sys.b())
        .all(|(r, b)| (dot(r, x) - b).abs() <= TAU_ORACLE * scale * (1.0 + b.abs()))
        && sys
            .c()
            .iter_rows()
            .zip(sys.d())
            .all(|(r, d)| dot(r, x) - d <= TAU_ORACLE * scale * (1.0 + d.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::box_rows;

    fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn interval() {
        let s = LinearSystem::inequalities(1, &[vec![1.0], vec![-1.0]], &[3.0, 0.0]).unwrap();
        let v = oracle_feasible(&s).unwrap();
        assert!(v.feasible);
        assert_eq!(sorted(v.vertices.unwrap()), vec![vec![0.0], vec![3.0]]);
    }

    #[test]
    fn empty_interval() {
        let s = LinearSystem::inequalities(1, &[vec![1.0], vec![-1.0]], &[-1.0, 0.0]).unwrap();
        assert!(!oracle_feasible(&s).unwrap().feasible);
    }

    #[test]
    fn simplex_vertices() {
        let s = LinearSystem::from_rows(
            2,
            &[vec![1.0, 1.0]],
            &[2.0],
            &[vec![-1.0, 0.0], vec![0.0, -1.0]],
            &[0.0, 0.0],
        )
        .unwrap();
        let v = oracle_feasible(&s).unwrap();
        assert_eq!(sorted(v.vertices.unwrap()), vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
    }

    #[test]
    fn lineality_is_factored_out() {
        // a half-plane has no vertices but is nonempty
        let s = LinearSystem::inequalities(2, &[vec![1.0, 1.0]], &[1.0]).unwrap();
        let v = oracle_feasible(&s).unwrap();
        assert!(v.feasible);
        assert!(satisfies(&s, v.witness.as_ref().unwrap()));
        // no constraints at all
        let free = LinearSystem::inequalities(3, &[], &[]).unwrap();
        assert!(oracle_feasible(&free).unwrap().feasible);
    }

    #[test]
    fn exact_rationals() {
        let q = Q::from_f64(0.375).unwrap();
        assert_eq!(q, Q::new(3, 8));
        assert_eq!(Q::from_f64(-12.0).unwrap(), Q::from_integer(-12));
        assert!(Q::from_f64(0.1).is_some());
    }

    #[test]
    fn integer_enumeration() {
        let (c, d) = box_rows(2, 1.0);
        let sum = |b: f64, k: f64| {
            LinearSystem::new(
                crate::linalg::Matrix::from_rows(2, &[vec![k, k]]).unwrap(),
                vec![b],
                c.clone(),
                d.clone(),
            )
            .unwrap()
        };
        assert!(oracle_integer01(&sum(1.0, 1.0)).unwrap());
        assert!(!oracle_integer01(&sum(1.0, 2.0)).unwrap());
        let unbounded = LinearSystem::inequalities(1, &[vec![1.0]], &[1.0]).unwrap();
        assert_eq!(oracle_integer01(&unbounded), Err(OracleError::MissingBounds(0)));
    }

    #[test]
    fn strict_witness() {
        let s = LinearSystem::from_rows(
            2,
            &[vec![1.0, 1.0]],
            &[2.0],
            &[vec![-1.0, 0.0], vec![0.0, -1.0]],
            &[0.0, 0.0],
        )
        .unwrap();
        assert_eq!(oracle_strict(&s).unwrap(), Some(vec![1.0, 1.0]));
        assert!(strictly_feasible(&s).unwrap());
        let forced = LinearSystem::from_rows(
            2,
            &[vec![1.0, 0.0]],
            &[0.0],
            &[vec![-1.0, 0.0], vec![0.0, -1.0], vec![0.0, 1.0]],
            &[0.0, 0.0, 1.0],
        )
        .unwrap();
        assert_eq!(oracle_strict(&forced).unwrap(), None);
    }

    #[test]
    fn limits_fail_loudly() {
        let s = LinearSystem::inequalities(15, &[vec![1.0; 15]], &[1.0]).unwrap();
        assert!(matches!(oracle_feasible(&s), Err(OracleError::LimitExceeded { .. })));
    }

    #[test]
    fn subsets_enumerate_all() {
        let mut s = vec![0, 1];
        let mut count = 1;
        while next_subset(&mut s, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
    }
}
