//! Dense vector and matrix kernels.
//!
//! Everything here is sized for the small, dense systems the solvers work on:
//! matrices are row-major `Vec<f64>` and the only factorization kept around is
//! the Cholesky factor of `A·Aᵀ` used for repeated affine projections.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Norms at or below this are treated as zero.
pub const TAU_ZERO: f64 = 1e-12;

/// Smallest accepted reciprocal condition number of `A·Aᵀ`.
pub const RCOND_MIN: f64 = 1e-14;

/// Feasibility tolerance for `Ax = b`, scaled by the right-hand side.
pub fn tau_lin(b_inf: f64) -> f64 {
    1e-9 * (1.0 + b_inf)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("equality matrix is rank deficient (reciprocal condition {rcond:e})")]
    RankDeficient { rcond: f64 },
    #[error("hyperplane normal has (numerically) zero norm")]
    ZeroNormal,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system is singular")]
    Singular,
}

/// Row-major dense matrix.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// An empty matrix with `cols` columns and no rows.
    pub fn empty(cols: usize) -> Self {
        Matrix::zeros(0, cols)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows<R: AsRef<[f64]>>(cols: usize, rows: &[R]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn push_row(&mut self, row: &[f64]) -> Result<(), LinalgError> {
        if row.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    /// Removes row `i` and returns it.
    pub fn remove_row(&mut self, i: usize) -> Vec<f64> {
        let start = i * self.cols;
        let removed: Vec<f64> = self.data.drain(start..start + self.cols).collect();
        self.rows -= 1;
        removed
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter_rows().map(<[f64]>::to_vec).collect()
    }

    /// `self · x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        self.iter_rows().map(|r| dot(r, x)).collect()
    }

    /// `selfᵀ · y`
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, &yi) in self.iter_rows().zip(y) {
            if yi != 0.0 {
                axpy(yi, r, &mut out);
            }
        }
        out
    }

    /// `self · selfᵀ`
    pub fn gram(&self) -> Matrix {
        let m = self.rows;
        let mut g = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|v| **v != 0.0).count()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// `y += alpha · x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(alpha: f64, a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| alpha * x).collect()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Orthogonal projector onto `{x : Ax = b}` for a full-row-rank `A`.
///
/// `A·Aᵀ` is factored once at build time; each projection costs two
/// triangular solves plus two matrix-vector products.
#[derive(Clone, Debug)]
pub struct AffineProjector {
    a: Matrix,
    b: Vec<f64>,
    /// Lower-triangular Cholesky factor of `A·Aᵀ`, row-major `m × m`.
    chol: Vec<f64>,
    tol: f64,
}

impl AffineProjector {
    /// Factors `A·Aᵀ`. With no rows the projector is the identity.
    pub fn build(a: &Matrix, b: &[f64]) -> Result<Self, LinalgError> {
        let m = a.nrows();
        if b.len() != m {
            return Err(LinalgError::DimensionMismatch {
                expected: m,
                found: b.len(),
            });
        }
        let gram = a.gram();
        if m > 0 {
            let rcond = reciprocal_condition(&gram);
            if !(rcond >= RCOND_MIN) {
                return Err(LinalgError::RankDeficient { rcond });
            }
        }
        let chol = cholesky(&gram).ok_or(LinalgError::RankDeficient { rcond: 0.0 })?;
        Ok(AffineProjector {
            a: a.clone(),
            b: b.to_vec(),
            chol,
            tol: tau_lin(norm_inf(b)),
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    /// `τ_lin` for this right-hand side.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Nearest point of the affine subspace to `z`.
    pub fn project(&self, z: &[f64]) -> Vec<f64> {
        self.project_with_multipliers(z).0
    }

    /// Returns `(p, y)` with `p = z − Aᵀy` and `y = (A·Aᵀ)⁻¹(Az − b)`.
    ///
    /// `y` expresses `z − p` as a combination of the rows of `A`.
    pub fn project_with_multipliers(&self, z: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let m = self.a.nrows();
        if m == 0 {
            return (z.to_vec(), Vec::new());
        }
        let mut y: Vec<f64> = self.a.iter_rows().zip(&self.b).map(|(r, bi)| dot(r, z) - bi).collect();
        self.solve_gram(&mut y);
        let mut p = z.to_vec();
        for (r, &yi) in self.a.iter_rows().zip(&y) {
            axpy(-yi, r, &mut p);
        }
        (p, y)
    }

    /// `‖Ax − b‖∞`
    pub fn residual_inf(&self, x: &[f64]) -> f64 {
        self.a
            .iter_rows()
            .zip(&self.b)
            .fold(0.0, |acc, (r, bi)| acc.max((dot(r, x) - bi).abs()))
    }

    /// Solves `(A·Aᵀ) y = rhs` in place.
    fn solve_gram(&self, y: &mut [f64]) {
        let m = y.len();
        let l = &self.chol;
        for i in 0..m {
            let mut s = y[i];
            for k in 0..i {
                s -= l[i * m + k] * y[k];
            }
            y[i] = s / l[i * m + i];
        }
        for i in (0..m).rev() {
            let mut s = y[i];
            for k in i + 1..m {
                s -= l[k * m + i] * y[k];
            }
            y[i] = s / l[i * m + i];
        }
    }
}

fn cholesky(g: &Matrix) -> Option<Vec<f64>> {
    let m = g.nrows();
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = g[(i, j)];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * m + i] = s.sqrt();
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    Some(l)
}

/// `λ_min / λ_max` of a symmetric positive semidefinite matrix.
fn reciprocal_condition(g: &Matrix) -> f64 {
    let m = g.nrows();
    let dm = nalgebra::DMatrix::from_row_slice(m, m, g.as_slice());
    let eig = nalgebra::SymmetricEigen::new(dm);
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi <= 0.0 {
        0.0
    } else {
        (lo / hi).max(0.0)
    }
}

/// Nearest point to `z` on the hyperplane `h·x = δ`.
pub fn project_hyperplane(h: &[f64], delta: f64, z: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let hh = dot(h, h);
    if hh.sqrt() <= TAU_ZERO {
        return Err(LinalgError::ZeroNormal);
    }
    let step = (dot(h, z) - delta) / hh;
    let mut out = z.to_vec();
    axpy(-step, h, &mut out);
    Ok(out)
}

/// `(c·z − d) / ‖c‖`: negative iff `z` strictly satisfies `c·x ≤ d`.
pub fn signed_distance(c: &[f64], d: f64, z: &[f64]) -> Result<f64, LinalgError> {
    let n = norm(c);
    if n <= TAU_ZERO {
        return Err(LinalgError::ZeroNormal);
    }
    Ok((dot(c, z) - d) / n)
}

/// Incrementally built orthonormal basis of a row space (modified Gram-Schmidt).
#[derive(Clone, Debug, Default)]
pub struct RowBasis {
    basis: Vec<Vec<f64>>,
}

impl RowBasis {
    pub fn new() -> Self {
        RowBasis::default()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Component of `v` orthogonal to the current span.
    pub fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut r = v.to_vec();
        // two passes keep the residual orthogonal in floating point
        for _ in 0..2 {
            for q in &self.basis {
                let c = dot(q, &r);
                axpy(-c, q, &mut r);
            }
        }
        r
    }

    /// Whether `v` lies in the span, relative to `‖v‖`.
    pub fn contains(&self, v: &[f64], rel_tol: f64) -> bool {
        norm(&self.residual(v)) <= rel_tol * norm(v).max(TAU_ZERO)
    }

    /// Adds `v` if it is independent of the span; returns whether it was added.
    pub fn try_add(&mut self, v: &[f64], rel_tol: f64) -> bool {
        let r = self.residual(v);
        let rn = norm(&r);
        if rn <= rel_tol * norm(v).max(TAU_ZERO) {
            return false;
        }
        self.basis.push(scale(1.0 / rn, &r));
        true
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.basis
    }
}

/// Minimum-norm correction of `x0` onto `{x : Mx = rhs}` for an `M` of full row rank.
pub fn project_onto_rows(m: &Matrix, rhs: &[f64], x0: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let p = AffineProjector::build(m, rhs)?;
    Ok(p.project(x0))
}

/// Gaussian elimination with partial pivoting for a square system.
pub fn solve_square(m: &Matrix, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let n = m.nrows();
    if m.ncols() != n || rhs.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    let scale = a.max_abs().max(1.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))
            .unwrap();
        if a[(piv, col)].abs() <= 1e-12 * scale {
            return Err(LinalgError::Singular);
        }
        if piv != col {
            for j in 0..n {
                let t = a[(piv, j)];
                a[(piv, j)] = a[(col, j)];
                a[(col, j)] = t;
            }
            b.swap(piv, col);
        }
        for i in col + 1..n {
            let f = a[(i, col)] / a[(col, col)];
            if f != 0.0 {
                for j in col..n {
                    let v = a[(col, j)];
                    a[(i, j)] -= f * v;
                }
                b[i] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[(i, j)] * x[j];
        }
        x[i] = s / a[(i, i)];
    }
    Ok(x)
}
