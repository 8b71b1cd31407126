//! Problem representation for `Ax = b, Cx ≤ d` and its transforms.
//!
//! Besides the plain system this module houses the homogenized form
//! `Ax − bt = 0, Cx − dt ≤ 0, −t ≤ −1`, its strengthened variant (every
//! inequality right-hand side lowered by ε), the bounded-to-standard-form
//! rewrite, and the certificates that make every induced hyperplane
//! machine-checkable.

mod generators;
mod io;

pub use generators::{gen_random01, gen_wedge};
pub use io::{format_instance, parse_instance, read_instance, write_instance};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{dot, norm, norm_inf, tau_lin, LinalgError, Matrix, RowBasis, TAU_ZERO};

/// Tolerance for certificate reconstruction, relative to the normal's size.
pub fn tau_cert(h_norm: f64) -> f64 {
    1e-8 * (1.0 + h_norm)
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{block} row {index} is zero")]
    ZeroRow { block: &'static str, index: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("system is not homogenized")]
    NotHomogenized,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid JSON instance: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `Ax = b, Cx ≤ d` over `n` variables.
///
/// Rows of `A` and `C` are never zero. A homogenized system remembers which
/// inequality row is the `−t ≤ −1` row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearSystem {
    a: Matrix,
    b: Vec<f64>,
    c: Matrix,
    d: Vec<f64>,
    labels: Option<RowLabels>,
    homogenization_row: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RowLabels {
    pub equalities: Vec<String>,
    pub inequalities: Vec<String>,
}

impl LinearSystem {
    pub fn new(a: Matrix, b: Vec<f64>, c: Matrix, d: Vec<f64>) -> Result<Self, ModelError> {
        if a.ncols() != c.ncols() {
            return Err(ModelError::DimensionMismatch(format!(
                "A has {} columns but C has {}",
                a.ncols(),
                c.ncols()
            )));
        }
        if a.nrows() != b.len() {
            return Err(ModelError::DimensionMismatch(format!(
                "A has {} rows but b has {} entries",
                a.nrows(),
                b.len()
            )));
        }
        if c.nrows() != d.len() {
            return Err(ModelError::DimensionMismatch(format!(
                "C has {} rows but d has {} entries",
                c.nrows(),
                d.len()
            )));
        }
        for (i, r) in a.iter_rows().enumerate() {
            if norm(r) <= TAU_ZERO {
                return Err(ModelError::ZeroRow {
                    block: "equality",
                    index: i,
                });
            }
        }
        for (k, r) in c.iter_rows().enumerate() {
            if norm(r) <= TAU_ZERO {
                return Err(ModelError::ZeroRow {
                    block: "inequality",
                    index: k,
                });
            }
        }
        Ok(LinearSystem {
            a,
            b,
            c,
            d,
            labels: None,
            homogenization_row: None,
        })
    }

    /// Convenience constructor from row slices.
    pub fn from_rows(n: usize, a: &[Vec<f64>], b: &[f64], c: &[Vec<f64>], d: &[f64]) -> Result<Self, ModelError> {
        LinearSystem::new(
            Matrix::from_rows(n, a)?,
            b.to_vec(),
            Matrix::from_rows(n, c)?,
            d.to_vec(),
        )
    }

    /// Inequalities only.
    pub fn inequalities(n: usize, c: &[Vec<f64>], d: &[f64]) -> Result<Self, ModelError> {
        LinearSystem::from_rows(n, &[], &[], c, d)
    }

    pub fn with_labels(mut self, labels: RowLabels) -> Result<Self, ModelError> {
        if labels.equalities.len() != self.m() || labels.inequalities.len() != self.l() {
            return Err(ModelError::DimensionMismatch("label count".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&RowLabels> {
        self.labels.as_ref()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }
    pub fn m(&self) -> usize {
        self.a.nrows()
    }
    pub fn l(&self) -> usize {
        self.c.nrows()
    }
    pub fn a(&self) -> &Matrix {
        &self.a
    }
    pub fn b(&self) -> &[f64] {
        &self.b
    }
    pub fn c(&self) -> &Matrix {
        &self.c
    }
    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// Index of the `−t ≤ −(1+ε)` row when this system is homogenized.
    pub fn homogenization_row(&self) -> Option<usize> {
        self.homogenization_row
    }

    /// `max_k ‖c_k‖`, zero without inequalities.
    pub fn c_max(&self) -> f64 {
        self.c.iter_rows().map(norm).fold(0.0, f64::max)
    }

    pub fn eq_residual_inf(&self, x: &[f64]) -> f64 {
        self.a
            .iter_rows()
            .zip(&self.b)
            .fold(0.0, |acc, (r, bi)| acc.max((dot(r, x) - bi).abs()))
    }

    /// `max_k (c_k·x − d_k)`, clamped below at zero.
    pub fn ineq_violation_max(&self, x: &[f64]) -> f64 {
        self.c
            .iter_rows()
            .zip(&self.d)
            .fold(0.0, |acc, (r, dk)| acc.max(dot(r, x) - dk))
    }

    /// `τ_lin` for this right-hand side.
    pub fn tau_lin(&self) -> f64 {
        tau_lin(norm_inf(&self.b))
    }

    /// Whether `x` satisfies the system: equalities within `τ_lin`, and
    /// `Cx ≤ d + slack`.
    pub fn is_satisfied_by(&self, x: &[f64], slack: f64) -> bool {
        x.len() == self.n()
            && self.eq_residual_inf(x) <= self.tau_lin().max(slack)
            && self.ineq_violation_max(x) <= slack
    }

    pub fn is_integral(&self) -> bool {
        let int = |v: &f64| v.fract() == 0.0 && v.abs() < 2f64.powi(52);
        self.a.as_slice().iter().all(int)
            && self.b.iter().all(int)
            && self.c.as_slice().iter().all(int)
            && self.d.iter().all(int)
    }

    /// The same system with `d` replaced by `d + shift·1`.
    pub fn with_shifted_rhs(&self, shift: f64) -> LinearSystem {
        let mut out = self.clone();
        for v in &mut out.d {
            *v += shift;
        }
        out
    }

    /// Moves inequality row `k` into the equality block as `c_k·x = d_k`.
    pub fn move_to_equalities(&mut self, k: usize) {
        let row = self.c.remove_row(k);
        let rhs = self.d.remove(k);
        self.a.push_row(&row).expect("row length matches");
        self.b.push(rhs);
        if let Some(labels) = &mut self.labels {
            let name = labels.inequalities.remove(k);
            labels.equalities.push(name);
        }
        self.homogenization_row = match self.homogenization_row {
            Some(h) if h == k => None,
            Some(h) if h > k => Some(h - 1),
            other => other,
        };
    }

    /// Drops inequality row `k`.
    pub fn remove_inequality(&mut self, k: usize) {
        self.c.remove_row(k);
        self.d.remove(k);
        if let Some(labels) = &mut self.labels {
            labels.inequalities.remove(k);
        }
        self.homogenization_row = match self.homogenization_row {
            Some(h) if h == k => None,
            Some(h) if h > k => Some(h - 1),
            other => other,
        };
    }

    /// Removes linearly dependent equality rows, keeping the first
    /// independent ones in order. Reports the first inconsistent row, if any.
    pub fn reduce_equalities(&self) -> EqualityReduction {
        const REL_TOL: f64 = 1e-9;
        let mut rows_only = RowBasis::new();
        let mut augmented = RowBasis::new();
        let mut keep = Vec::new();
        for (i, r) in self.a.iter_rows().enumerate() {
            let mut aug = r.to_vec();
            aug.push(self.b[i]);
            if rows_only.try_add(r, REL_TOL) {
                augmented.try_add(&aug, REL_TOL);
                keep.push(i);
            } else if !augmented.contains(&aug, REL_TOL) {
                return EqualityReduction::Inconsistent { row: i };
            }
        }
        if keep.len() == self.m() {
            return EqualityReduction::Reduced(self.clone());
        }
        let mut out = self.clone();
        out.a = Matrix::from_rows(
            self.n(),
            &keep.iter().map(|&i| self.a.row(i).to_vec()).collect::<Vec<_>>(),
        )
        .expect("consistent widths");
        out.b = keep.iter().map(|&i| self.b[i]).collect();
        if let Some(labels) = &mut out.labels {
            labels.equalities = keep.iter().map(|&i| labels.equalities[i].clone()).collect();
        }
        EqualityReduction::Reduced(out)
    }

    /// Rank of the equality block.
    pub fn equality_rank(&self) -> usize {
        let mut rb = RowBasis::new();
        self.a.iter_rows().filter(|r| rb.try_add(r, 1e-9)).count()
    }

    /// Total encoding length of the data: each entry contributes
    /// `1 + ⌈log₂(|v| + 1)⌉` bits. Meaningful for integer data.
    pub fn bit_length(&self) -> u64 {
        self.a
            .as_slice()
            .iter()
            .chain(&self.b)
            .chain(self.c.as_slice())
            .chain(&self.d)
            .map(|&v| entry_bits(v))
            .sum()
    }

    /// Largest encoding length of a single row (equalities count as rows),
    /// plus one, floored at `n + 1`.
    pub fn facet_complexity(&self) -> u64 {
        let row_bits = |r: &[f64], rhs: f64| r.iter().map(|&v| entry_bits(v)).sum::<u64>() + entry_bits(rhs);
        let widest = self
            .a
            .iter_rows()
            .zip(&self.b)
            .chain(self.c.iter_rows().zip(&self.d))
            .map(|(r, &rhs)| row_bits(r, rhs))
            .max()
            .unwrap_or(0);
        (widest + 1).max(self.n() as u64 + 1)
    }
}

fn entry_bits(v: f64) -> u64 {
    1 + (v.abs() + 1.0).log2().ceil() as u64
}

#[derive(Clone, Debug, PartialEq)]
pub enum EqualityReduction {
    Reduced(LinearSystem),
    Inconsistent { row: usize },
}

/// Lifts `Ax = b, Cx ≤ d` to `Ax − bt = 0, Cx − dt ≤ 0, −t ≤ −1` in `n + 1`
/// variables; the last inequality row is the homogenization row.
pub fn homogenize(sys: &LinearSystem) -> LinearSystem {
    let n = sys.n();
    let lift = |m: &Matrix, rhs: &[f64]| {
        let mut out = Matrix::zeros(m.nrows(), n + 1);
        for (i, r) in m.iter_rows().enumerate() {
            out.row_mut(i)[..n].copy_from_slice(r);
            out[(i, n)] = -rhs[i];
        }
        out
    };
    let a = lift(&sys.a, &sys.b);
    let mut c = lift(&sys.c, &sys.d);
    let mut t_row = vec![0.0; n + 1];
    t_row[n] = -1.0;
    c.push_row(&t_row).expect("width n + 1");
    let mut d = vec![0.0; sys.l()];
    d.push(-1.0);
    let labels = sys.labels.as_ref().map(|l| {
        let mut l = l.clone();
        l.inequalities.push("homogenization".into());
        l
    });
    LinearSystem {
        b: vec![0.0; sys.m()],
        a,
        c,
        d,
        labels,
        homogenization_row: Some(sys.l()),
    }
}

/// Lowers every inequality right-hand side of a homogenized system by `eps`.
pub fn strengthen(sys: &LinearSystem, eps: f64) -> Result<LinearSystem, ModelError> {
    if sys.homogenization_row.is_none() {
        return Err(ModelError::NotHomogenized);
    }
    let mut out = sys.clone();
    for v in &mut out.d {
        *v -= eps;
    }
    Ok(out)
}

/// Rewrites `Ax = b, 0 ≤ x ≤ λ1` as `Ax = b, x + y = λ1, x ≥ 0, y ≥ 0`
/// in `2n` variables.
pub fn standardize_bounded(a: &Matrix, b: &[f64], lambda: f64) -> Result<LinearSystem, ModelError> {
    if !(lambda > 0.0) {
        return Err(ModelError::DimensionMismatch("bound λ must be positive".into()));
    }
    let n = a.ncols();
    let m = a.nrows();
    let mut at = Matrix::zeros(m + n, 2 * n);
    for i in 0..m {
        at.row_mut(i)[..n].copy_from_slice(a.row(i));
    }
    for j in 0..n {
        at[(m + j, j)] = 1.0;
        at[(m + j, n + j)] = 1.0;
    }
    let mut rhs = b.to_vec();
    rhs.extend(std::iter::repeat_n(lambda, n));
    let mut c = Matrix::zeros(2 * n, 2 * n);
    for j in 0..2 * n {
        c[(j, j)] = -1.0;
    }
    LinearSystem::new(at, rhs, c, vec![0.0; 2 * n])
}

/// `0 ≤ x ≤ ub·1` as rows `[I; −I]`, `d = (ub,…,ub, 0,…,0)`.
pub fn box_rows(n: usize, ub: f64) -> (Matrix, Vec<f64>) {
    let mut c = Matrix::zeros(2 * n, n);
    for j in 0..n {
        c[(j, j)] = 1.0;
        c[(n + j, j)] = -1.0;
    }
    let mut d = vec![ub; n];
    d.extend(std::iter::repeat_n(0.0, n));
    (c, d)
}

/// Multipliers proving that an induced inequality is valid: equality rows
/// take any sign, inequality rows (the homogenization row included) are
/// non-negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub eq_mults: Vec<f64>,
    pub ineq_mults: Vec<f64>,
}

impl Certificate {
    pub fn zeros(m: usize, l: usize) -> Self {
        Certificate {
            eq_mults: vec![0.0; m],
            ineq_mults: vec![0.0; l],
        }
    }

    /// Unit multiplier on inequality row `k`.
    pub fn unit_inequality(m: usize, l: usize, k: usize) -> Self {
        let mut c = Certificate::zeros(m, l);
        c.ineq_mults[k] = 1.0;
        c
    }

    /// `(Aᵀλ + Cᵀα, λ·b + α·d)`
    pub fn reconstruct(&self, sys: &LinearSystem) -> (Vec<f64>, f64) {
        let mut h = sys.a.tr_mul_vec(&self.eq_mults);
        let hc = sys.c.tr_mul_vec(&self.ineq_mults);
        for (x, y) in h.iter_mut().zip(&hc) {
            *x += y;
        }
        let delta = dot(&self.eq_mults, &sys.b) + dot(&self.ineq_mults, &sys.d);
        (h, delta)
    }

    /// `α·self + (1 − α)·other`
    pub fn convex(&self, alpha: f64, other: &Certificate) -> Certificate {
        let mix = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| alpha * x + (1.0 - alpha) * y).collect()
        };
        Certificate {
            eq_mults: mix(&self.eq_mults, &other.eq_mults),
            ineq_mults: mix(&self.ineq_mults, &other.ineq_mults)
                .into_iter()
                .map(|v| v.max(0.0))
                .collect(),
        }
    }

    /// `self + γ·other`
    pub fn add_scaled(&self, gamma: f64, other: &Certificate) -> Certificate {
        let mix = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + gamma * y).collect() };
        Certificate {
            eq_mults: mix(&self.eq_mults, &other.eq_mults),
            ineq_mults: mix(&self.ineq_mults, &other.ineq_mults),
        }
    }

    /// Multiplier of the homogenization row, when `sys` has one.
    pub fn homogenization_mult(&self, sys: &LinearSystem) -> Option<f64> {
        sys.homogenization_row.map(|k| self.ineq_mults[k])
    }
}

/// An induced inequality `h·x ≤ δ` together with its validity proof.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub cert: Certificate,
}

impl Hyperplane {
    /// `(h·z − δ) / ‖h‖`
    pub fn signed_distance(&self, z: &[f64]) -> f64 {
        (dot(&self.normal, z) - self.offset) / norm(&self.normal)
    }

    pub fn unit_normal(&self) -> Vec<f64> {
        let n = norm(&self.normal);
        self.normal.iter().map(|v| v / n).collect()
    }
}

/// Open ball `B(z, r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Option<Self> {
        (radius > 0.0).then_some(Ball { center, radius })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        crate::linalg::distance(&self.center, x) < self.radius
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertificateCheck {
    Valid,
    Invalid(CertificateResiduals),
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CertificateCheck::Valid)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateResiduals {
    pub normal: f64,
    pub offset: f64,
    pub min_ineq_mult: f64,
    pub tolerance: f64,
}

/// Checks that `hp.cert` reconstructs `hp` from the rows of `sys` and that
/// all inequality multipliers are non-negative.
pub fn validate_certificate(sys: &LinearSystem, hp: &Hyperplane) -> CertificateCheck {
    let cert = &hp.cert;
    if cert.eq_mults.len() != sys.m() || cert.ineq_mults.len() != sys.l() || hp.normal.len() != sys.n() {
        return CertificateCheck::Invalid(CertificateResiduals {
            normal: f64::INFINITY,
            offset: f64::INFINITY,
            min_ineq_mult: f64::NAN,
            tolerance: 0.0,
        });
    }
    let (h, delta) = cert.reconstruct(sys);
    let tol = tau_cert(norm(&hp.normal));
    let normal = norm(&crate::linalg::sub(&h, &hp.normal));
    let offset = (delta - hp.offset).abs();
    let min_ineq_mult = cert.ineq_mults.iter().copied().fold(f64::INFINITY, f64::min);
    let min_ok = cert.ineq_mults.is_empty() || min_ineq_mult >= -tol;
    if normal <= tol && offset <= tol && min_ok {
        CertificateCheck::Valid
    } else {
        CertificateCheck::Invalid(CertificateResiduals {
            normal,
            offset,
            min_ineq_mult,
            tolerance: tol,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Random01,
    Wedge,
    File,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Random01 => "random01",
            Family::Wedge => "wedge",
            Family::File => "file",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random01" => Ok(Family::Random01),
            "wedge" => Ok(Family::Wedge),
            "file" => Ok(Family::File),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

/// A named problem with the provenance needed to regenerate it.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub name: String,
    pub system: LinearSystem,
    pub family: Family,
    pub seed: u64,
    pub meta: BTreeMap<String, String>,
}

impl Instance {
    pub fn from_system(name: impl Into<String>, system: LinearSystem) -> Self {
        Instance {
            name: name.into(),
            system,
            family: Family::File,
            seed: 0,
            meta: BTreeMap::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys_1d() -> LinearSystem {
        LinearSystem::from_rows(1, &[vec![1.0]], &[2.0], &[vec![1.0]], &[3.0]).unwrap()
    }

    #[test]
    fn rejects_zero_rows_and_bad_shapes() {
        let err = LinearSystem::from_rows(2, &[], &[], &[vec![0.0, 0.0]], &[1.0]);
        assert!(matches!(
            err,
            Err(ModelError::ZeroRow {
                block: "inequality",
                index: 0
            })
        ));
        let err = LinearSystem::from_rows(2, &[vec![1.0, 0.0]], &[], &[], &[]);
        assert!(matches!(err, Err(ModelError::DimensionMismatch(_))));
    }

    #[test]
    fn homogenize_layout() {
        let h = homogenize(&sys_1d());
        assert_eq!(h.n(), 2);
        assert_eq!(h.a().to_rows(), vec![vec![1.0, -2.0]]);
        assert_eq!(h.b(), &[0.0]);
        assert_eq!(h.c().to_rows(), vec![vec![1.0, -3.0], vec![0.0, -1.0]]);
        assert_eq!(h.d(), &[0.0, -1.0]);
        assert_eq!(h.homogenization_row(), Some(1));
    }

    #[test]
    fn homogenize_shape() {
        let s = LinearSystem::from_rows(
            2,
            &[vec![1.0, 1.0]],
            &[1.0],
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            &[1.0, 1.0],
        )
        .unwrap();
        let h = homogenize(&s);
        assert_eq!((h.n(), h.m(), h.l()), (3, 1, 3));
    }

    #[test]
    fn homogenize_preserves_solutions() {
        let s = sys_1d();
        let h = homogenize(&s);
        assert!(s.is_satisfied_by(&[2.0], 0.0));
        assert!(h.is_satisfied_by(&[2.0, 1.0], 0.0));
        // a scaled solution (x, t) maps back through x / t
        assert!(h.is_satisfied_by(&[5.0, 2.5], 0.0));
    }

    #[test]
    fn strengthen_lowers_rhs() {
        let h = homogenize(&LinearSystem::inequalities(1, &[vec![1.0]], &[3.0]).unwrap());
        let s = strengthen(&h, 1.0).unwrap();
        assert_eq!(s.c().to_rows(), vec![vec![1.0, -3.0], vec![0.0, -1.0]]);
        assert_eq!(s.d(), &[-1.0, -2.0]);
        assert_eq!(strengthen(&h, 0.0).unwrap(), h);
        assert!(matches!(strengthen(&sys_1d(), 1.0), Err(ModelError::NotHomogenized)));
    }

    #[test]
    fn strengthened_standard_form() {
        // Ax = b, -x <= 0  ->  Ax - bt = 0, -x <= -1, -t <= -2
        let a = Matrix::from_rows(2, &[vec![1.0, 1.0]]).unwrap();
        let c = Matrix::from_rows(2, &[vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let s = LinearSystem::new(a, vec![2.0], c, vec![0.0, 0.0]).unwrap();
        let st = strengthen(&homogenize(&s), 1.0).unwrap();
        assert_eq!(st.a().to_rows(), vec![vec![1.0, 1.0, -2.0]]);
        assert_eq!(
            st.c().to_rows(),
            vec![vec![-1.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, -1.0]]
        );
        assert_eq!(st.d(), &[-1.0, -1.0, -2.0]);
    }

    #[test]
    fn standardize_layout() {
        let a = Matrix::from_rows(2, &[vec![1.0, 1.0]]).unwrap();
        let s = standardize_bounded(&a, &[1.0], 1.0).unwrap();
        assert_eq!(
            s.a().to_rows(),
            vec![
                vec![1.0, 1.0, 0.0, 0.0],
                vec![1.0, 0.0, 1.0, 0.0],
                vec![0.0, 1.0, 0.0, 1.0]
            ]
        );
        assert_eq!(s.b(), &[1.0, 1.0, 1.0]);
        assert_eq!(s.l(), 4);
        // (x, y) = (0.25, 0.75, 0.75, 0.25): x + y = 1 forces 0 <= x <= 1
        assert!(s.is_satisfied_by(&[0.25, 0.75, 0.75, 0.25], 0.0));
        let r = 1.0 * (2.0f64 * 2.0).sqrt();
        assert!(norm(&[0.25, 0.75, 0.75, 0.25]) < r);
    }

    #[test]
    fn certificates() {
        let s = LinearSystem::from_rows(
            2,
            &[vec![1.0, 1.0]],
            &[2.0],
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            &[1.0, 3.0],
        )
        .unwrap();
        let unit = Hyperplane {
            normal: vec![1.0, 0.0],
            offset: 1.0,
            cert: Certificate::unit_inequality(1, 2, 0),
        };
        assert!(validate_certificate(&s, &unit).is_valid());

        let negative = Hyperplane {
            normal: vec![-0.1, 0.0],
            offset: -0.1,
            cert: Certificate {
                eq_mults: vec![0.0],
                ineq_mults: vec![-0.1, 0.0],
            },
        };
        assert!(!validate_certificate(&s, &negative).is_valid());

        // a1 + 2·c2 = (1, 3), rhs 2 + 2·3 = 8
        let other = Hyperplane {
            normal: vec![1.0, 3.0],
            offset: 8.0,
            cert: Certificate {
                eq_mults: vec![1.0],
                ineq_mults: vec![0.0, 2.0],
            },
        };
        assert!(validate_certificate(&s, &other).is_valid());
        let mixed = Hyperplane {
            normal: vec![0.3 + 0.7, 0.7 * 3.0],
            offset: 0.3 + 0.7 * 8.0,
            cert: unit.cert.convex(0.3, &other.cert),
        };
        assert!(validate_certificate(&s, &mixed).is_valid());
    }

    #[test]
    fn reduce_equalities_detects_dependence() {
        let s = LinearSystem::from_rows(
            2,
            &[vec![1.0, 1.0], vec![2.0, 2.0], vec![1.0, 0.0]],
            &[1.0, 2.0, 0.0],
            &[],
            &[],
        )
        .unwrap();
        match s.reduce_equalities() {
            EqualityReduction::Reduced(r) => {
                assert_eq!(r.m(), 2);
                assert_eq!(r.b(), &[1.0, 0.0]);
            }
            other => panic!("{other:?}"),
        }
        let bad = LinearSystem::from_rows(2, &[vec![1.0, 1.0], vec![2.0, 2.0]], &[1.0, 3.0], &[], &[]).unwrap();
        assert_eq!(bad.reduce_equalities(), EqualityReduction::Inconsistent { row: 1 });
    }

    #[test]
    fn move_row_updates_marker() {
        let mut h = homogenize(&LinearSystem::inequalities(1, &[vec![1.0], vec![-1.0]], &[1.0, 0.0]).unwrap());
        assert_eq!(h.homogenization_row(), Some(2));
        h.move_to_equalities(0);
        assert_eq!(h.homogenization_row(), Some(1));
        assert_eq!(h.m(), 1);
        assert_eq!(h.a().row(0), &[1.0, -1.0]);
    }

    #[test]
    fn encoding_lengths() {
        let s = LinearSystem::inequalities(2, &[vec![3.0, -1.0]], &[4.0]).unwrap();
        // bits: 3 -> 1+2, -1 -> 1+1, 4 -> 1+3
        assert_eq!(s.bit_length(), 3 + 2 + 4);
        assert_eq!(s.facet_complexity(), 10);
    }
}
