//! Dense Hermitian matrices, their spectral decomposition, functional
//! calculus and the tolerance-aware Loewner order.
//!
//! Every matrix that enters the library (A, B, X, Y, P, Q, ...) is carried
//! as a [`HermitianMatrix`]. The Hermitian invariant is enforced at
//! construction by replacing the input with `(M + M*)/2`, so roundoff
//! asymmetry from products never leaks into eigensolvers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::function::ScalarFunction;

/// General dense complex matrix (used for congruence factors).
pub type CMatrix = DMatrix<Complex64>;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Dense complex Hermitian matrix.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianMatrix({}x{}) ", self.dim(), self.dim())?;
        let real = self.is_real();
        f.debug_list()
            .entries((0..self.dim()).map(|i| {
                (0..self.dim())
                    .map(|j| {
                        let z = self.inner[(i, j)];
                        if real {
                            format!("{:.6}", z.re)
                        } else {
                            format!("{:.6}{:+.6}i", z.re, z.im)
                        }
                    })
                    .collect::<Vec<_>>()
            }))
            .finish()
    }
}

/// Returns `(M + M*)/2`.
pub fn symmetrize(m: &CMatrix) -> Result<HermitianMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(HermitianMatrix { inner: herm })
}

impl HermitianMatrix {
    /// Builds from a square complex matrix, symmetrizing it.
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        symmetrize(&m)
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            inner: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            inner: CMatrix::zeros(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        assert!(!diag.is_empty(), "dimension must be at least 1");
        let n = diag.len();
        let mut inner = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            inner[(i, i)] = Complex64::new(d, 0.0);
        }
        Self { inner }
    }

    /// Real symmetric matrix from rows (symmetrized).
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut m = CMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(v, 0.0);
            }
        }
        symmetrize(&m)
    }

    /// Builds from row-major real and imaginary parts.
    pub fn from_parts(dim: usize, re: &[f64], im: Option<&[f64]>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if re.len() != dim * dim {
            return Err(Error::Malformed(format!(
                "expected {} real entries for dim {dim}, got {}",
                dim * dim,
                re.len()
            )));
        }
        if let Some(im) = im {
            if im.len() != dim * dim {
                return Err(Error::Malformed(format!(
                    "expected {} imaginary entries for dim {dim}, got {}",
                    dim * dim,
                    im.len()
                )));
            }
        }
        if re.iter().chain(im.into_iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::Malformed("non-finite matrix entry".into()));
        }
        let m = CMatrix::from_fn(dim, dim, |i, j| {
            let k = i * dim + j;
            Complex64::new(re[k], im.map_or(0.0, |im| im[k]))
        });
        symmetrize(&m)
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn is_real(&self) -> bool {
        self.inner.iter().all(|z| z.im == 0.0)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            inner: &self.inner * Complex64::new(c, 0.0),
        }
    }

    /// Ordinary matrix product; generally not Hermitian.
    pub fn matmul(&self, other: &Self) -> CMatrix {
        &self.inner * &other.inner
    }

    /// Eigenvalues in ascending order (no eigenvectors).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.inner.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("dim >= 1")
    }

    /// Spectral norm, i.e. the largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        let ev = self.eigenvalues();
        ev[0].abs().max(ev[ev.len() - 1].abs())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            inner: &self.inner + &other.inner,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            inner: &self.inner - &other.inner,
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> MatrixJson {
        let n = self.dim();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.inner[(i, j)];
                re.push(z.re);
                im.push(z.im);
            }
        }
        let im = if im.iter().all(|&v| v == 0.0) {
            None
        } else {
            Some(im)
        };
        MatrixJson { dim: n, re, im }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&HermitianMatrix> for &HermitianMatrix {
            type Output = HermitianMatrix;
            fn $method(self, rhs: &HermitianMatrix) -> HermitianMatrix {
                self.$try(rhs).expect("dimension mismatch")
            }
        }
        impl $trait<HermitianMatrix> for HermitianMatrix {
            type Output = HermitianMatrix;
            fn $method(self, rhs: HermitianMatrix) -> HermitianMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, try_add);
impl_binop!(Sub, sub, try_sub);

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self.scale(-1.0)
    }
}

/// Wire format: `{"dim": n, "re": [...], "im": [...]}`, row-major, `im` optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl TryFrom<MatrixJson> for HermitianMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        HermitianMatrix::from_parts(j.dim, &j.re, j.im.as_deref())
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        HermitianMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Eigenvalues (ascending) with the unitary matrix of eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralData {
    /// `U · diag(values) · U*`.
    pub fn reassemble(&self, values: &[f64]) -> HermitianMatrix {
        assert_eq!(values.len(), self.eigenvalues.len());
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        let m = scaled * u.adjoint();
        symmetrize(&m).expect("square by construction")
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.reassemble(&values)
    }

    pub fn spectral_norm(&self) -> f64 {
        let n = self.eigenvalues.len();
        self.eigenvalues[0].abs().max(self.eigenvalues[n - 1].abs())
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn spectral_decompose(a: &HermitianMatrix) -> Result<SpectralData> {
    let eig = SymmetricEigen::try_new(a.inner.clone(), EIGEN_EPS, EIGEN_MAX_ITER).ok_or(
        Error::NoConvergence {
            norm: a.frobenius_norm(),
        },
    )?;
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence {
            norm: a.frobenius_norm(),
        });
    }
    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
    })
}

/// Relative tolerance with an absolute floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub rel: f64,
    pub abs_floor: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs_floor: 1e-12,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rel: f64, abs_floor: f64) -> Result<Self> {
        if !(rel > 0.0 && abs_floor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be positive (rel {rel}, abs_floor {abs_floor})"
            )));
        }
        Ok(Self { rel, abs_floor })
    }

    pub fn with_rel(rel: f64) -> Result<Self> {
        Self::new(rel, Self::default().abs_floor)
    }

    /// `max(abs_floor, rel · max_i ‖M_i‖)`.
    pub fn effective(&self, mats: &[&HermitianMatrix]) -> f64 {
        let scale = mats.iter().map(|m| m.spectral_norm()).fold(0.0, f64::max);
        self.from_scale(scale)
    }

    pub fn from_scale(&self, scale: f64) -> f64 {
        self.abs_floor.max(self.rel * scale)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Relation {
    /// `A ≤ B`
    Le,
    /// `A ≥ B`
    Ge,
    Eq,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub relation: Relation,
    /// Smallest eigenvalue of `B − A`.
    pub witness_min_eig_b_minus_a: f64,
    /// Smallest eigenvalue of `A − B`.
    pub witness_min_eig_a_minus_b: f64,
    pub tol_used: f64,
}

impl OrderVerdict {
    /// `A ≤ B` (true for both `Le` and `Eq`).
    pub fn is_le(&self) -> bool {
        matches!(self.relation, Relation::Le | Relation::Eq)
    }

    pub fn is_ge(&self) -> bool {
        matches!(self.relation, Relation::Ge | Relation::Eq)
    }
}

/// Compares `A` and `B` in the Loewner order.
pub fn loewner_compare(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    pol: &TolerancePolicy,
) -> Result<OrderVerdict> {
    let diff = b.try_sub(a)?;
    let ev = diff.eigenvalues();
    let min_b_minus_a = ev[0];
    let min_a_minus_b = -ev[ev.len() - 1];
    let tol = pol.effective(&[a, b]);
    let le = min_b_minus_a >= -tol;
    let ge = min_a_minus_b >= -tol;
    let relation = match (le, ge) {
        (true, true) => Relation::Eq,
        (true, false) => Relation::Le,
        (false, true) => Relation::Ge,
        (false, false) => Relation::Incomparable,
    };
    Ok(OrderVerdict {
        relation,
        witness_min_eig_b_minus_a: min_b_minus_a,
        witness_min_eig_a_minus_b: min_a_minus_b,
        tol_used: tol,
    })
}

/// `C* · A · C`, symmetrized.
pub fn congruence(c: &CMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    if c.nrows() != c.ncols() {
        return Err(Error::NotSquare {
            rows: c.nrows(),
            cols: c.ncols(),
        });
    }
    if c.nrows() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: c.nrows(),
        });
    }
    symmetrize(&(c.adjoint() * &a.inner * c))
}

/// `S · A · S` for Hermitian `S`; the congruence used by `A^{1/2} B A^{1/2}`.
pub fn sandwich(s: &HermitianMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    congruence(&s.inner, a)
}

/// Clamps eigenvalues that undershoot `bound` by at most `tol`; reports the
/// first one that undershoots by more.
fn clamp_below(values: &mut [f64], bound: f64, tol: f64) -> std::result::Result<(), f64> {
    for v in values.iter_mut() {
        if *v < bound {
            if *v < bound - tol {
                return Err(*v);
            }
            *v = bound;
        }
    }
    Ok(())
}

fn default_tol(spec: &SpectralData) -> f64 {
    TolerancePolicy::default().from_scale(spec.spectral_norm())
}

/// Functional calculus: `U · diag(f(λ_i)) · U*`.
pub fn apply_spectral(f: &ScalarFunction, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let spec = spectral_decompose(a)?;
    apply_to_spectrum(f, &spec)
}

/// Functional calculus on an existing decomposition.
pub fn apply_to_spectrum(f: &ScalarFunction, spec: &SpectralData) -> Result<HermitianMatrix> {
    let tol = default_tol(spec);
    let mut values = spec.eigenvalues.clone();
    let (lo, hi) = f.domain();
    if let Some(lo) = lo {
        clamp_below(&mut values, lo, tol).map_err(|eigenvalue| Error::Domain {
            function: f.label().to_string(),
            eigenvalue,
            bound: lo,
            tol,
        })?;
    }
    if let Some(hi) = hi {
        for v in values.iter_mut() {
            if *v > hi {
                if *v > hi + tol {
                    return Err(Error::Domain {
                        function: f.label().to_string(),
                        eigenvalue: *v,
                        bound: hi,
                        tol,
                    });
                }
                *v = hi;
            }
        }
    }
    let mut mapped = Vec::with_capacity(values.len());
    for v in values {
        mapped.push(f.try_eval(v)?);
    }
    Ok(spec.reassemble(&mapped))
}

fn psd_clamped(spec: &SpectralData) -> Result<Vec<f64>> {
    let tol = default_tol(spec);
    let mut values = spec.eigenvalues.clone();
    clamp_below(&mut values, 0.0, tol).map_err(|eigenvalue| Error::NotPsd { eigenvalue, tol })?;
    Ok(values)
}

/// Positive semidefinite square root.
pub fn psd_sqrt(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let spec = spectral_decompose(a)?;
    let values: Vec<f64> = psd_clamped(&spec)?.into_iter().map(f64::sqrt).collect();
    Ok(spec.reassemble(&values))
}

/// `|M| = (M·M)^{1/2}`.
pub fn matrix_abs(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(spectral_decompose(m)?.map(f64::abs))
}

/// Ensures `A` is positive definite beyond tolerance and returns its spectrum.
pub fn require_pd(a: &HermitianMatrix) -> Result<SpectralData> {
    let spec = spectral_decompose(a)?;
    let tol = default_tol(&spec);
    let min = spec.min();
    if min <= tol {
        return Err(Error::Singular {
            eigenvalue: min,
            tol,
        });
    }
    Ok(spec)
}

/// Ensures `A` is positive semidefinite within tolerance.
pub fn require_psd(a: &HermitianMatrix) -> Result<()> {
    let spec = spectral_decompose(a)?;
    psd_clamped(&spec).map(|_| ())
}

/// Inverse of a positive definite matrix.
pub fn pd_inverse(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(require_pd(a)?.map(f64::recip))
}

/// `(A^{1/2}, A^{-1/2})` for positive definite `A`.
pub fn pd_sqrt_pair(a: &HermitianMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let spec = require_pd(a)?;
    Ok((spec.map(f64::sqrt), spec.map(|l| l.sqrt().recip())))
}

/// Spectral pseudo-inverse: eigenvalues with modulus at most `tol` are treated as zero.
pub fn pseudo_inverse(a: &HermitianMatrix, tol: f64) -> Result<HermitianMatrix> {
    let spec = spectral_decompose(a)?;
    Ok(spec.map(|l| if l.abs() <= tol { 0.0 } else { l.recip() }))
}

/// Real power `A^p` of a positive semidefinite matrix (`p ≥ 0`).
pub fn psd_power(a: &HermitianMatrix, p: f64) -> Result<HermitianMatrix> {
    let spec = spectral_decompose(a)?;
    let values: Vec<f64> = psd_clamped(&spec)?
        .into_iter()
        .map(|l| if l == 0.0 && p == 0.0 { 1.0 } else { l.powf(p) })
        .collect();
    Ok(spec.reassemble(&values))
}
