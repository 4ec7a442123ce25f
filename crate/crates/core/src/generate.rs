//! Seeded random instances: positive definite matrices, dominated pairs,
//! unitaries and the two-dimensional projection family.
//!
//! All randomness comes from an explicit 64-bit seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hermitian::{pd_sqrt_pair, sandwich, CMatrix, HermitianMatrix, SpectralData};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a trial index into a base seed (splitmix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn gaussian_matrix(dim: usize, rng: &mut impl Rng) -> CMatrix {
    DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = gaussian_matrix(dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q.column_mut(j).apply(|z| *z *= phase);
    }
    q
}

/// Random real orthogonal matrix.
pub fn random_orthogonal(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g: DMatrix<f64> = DMatrix::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q.map(|v| Complex64::new(v, 0.0))
}

/// `U · diag(values) · U*` with a Haar unitary `U`.
pub fn with_random_eigenbasis(values: &[f64], rng: &mut impl Rng) -> HermitianMatrix {
    let u = random_unitary(values.len(), rng);
    SpectralData {
        eigenvalues: values.to_vec(),
        eigenvectors: u,
    }
    .reassemble(values)
}

/// Eigenvalues log-spread over `[lo, hi]`, endpoints included when `dim ≥ 2`.
fn log_spread(dim: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> Vec<f64> {
    if dim == 1 {
        return vec![(lo * hi).sqrt()];
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut v = vec![lo, hi];
    for _ in 2..dim {
        v.push(rng.random_range(llo..=lhi).exp());
    }
    v.sort_by(f64::total_cmp);
    v
}

/// Positive definite matrix with spectrum in `[lo, hi]` (both attained for `dim ≥ 2`).
pub fn random_pd_in(dim: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> Result<HermitianMatrix> {
    if dim == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "spectral range [{lo}, {hi}] must satisfy 0 < lo <= hi < inf"
        )));
    }
    let values = log_spread(dim, lo, hi, rng);
    Ok(with_random_eigenbasis(&values, rng))
}

/// Positive definite matrix with condition number `cond_target`
/// (eigenvalues in `[1, cond_target]`).
pub fn gen_pd(dim: usize, seed: u64, cond_target: f64) -> Result<HermitianMatrix> {
    if !(cond_target >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "condition target {cond_target} must be >= 1"
        )));
    }
    random_pd_in(dim, 1.0, cond_target, &mut rng_from_seed(seed))
}

/// `(A, B)` with `A` positive definite and `A ≤ B ≤ factor·A`, built as
/// `B = A^{1/2}(I + D)A^{1/2}` with `spec(D) ⊂ [0, factor − 1]`.
pub fn gen_dominated_pair(
    dim: usize,
    seed: u64,
    factor: f64,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let mut rng = rng_from_seed(seed);
    let cond = 10f64.powf(rng.random_range(0.0..=3.0));
    dominated_pair_with(dim, &mut rng, 1.0, cond, factor)
}

/// Dominated pair with `spec(A) ⊂ [lo, hi]`.
pub fn dominated_pair_with(
    dim: usize,
    rng: &mut impl Rng,
    lo: f64,
    hi: f64,
    factor: f64,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if !(factor > 1.0 && factor.is_finite()) {
        return Err(Error::InvalidParameter(format!("factor {factor} must be > 1")));
    }
    let a = random_pd_in(dim, lo, hi, rng)?;
    let d: Vec<f64> = (0..dim).map(|_| 1.0 + rng.random_range(0.0..=factor - 1.0)).collect();
    let middle = with_random_eigenbasis(&d, rng);
    let (half, _) = pd_sqrt_pair(&a)?;
    let b = sandwich(&half, &middle)?;
    Ok((a, b))
}

/// `P = e₁e₁ᵀ` and the rank-one projection onto `(cos θ, sin θ)`.
pub fn gen_projection_pair(theta: f64) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "angle {theta} must lie in [0, pi/2]"
        )));
    }
    let (s, c) = theta.sin_cos();
    let p = HermitianMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])?;
    let q = HermitianMatrix::from_real_rows(&[&[c * c, c * s], &[c * s, s * s]])?;
    Ok((p, q))
}

/// Invertible matrix `U · diag(s) · V` with singular values in `[1/spread, spread]`.
pub fn random_invertible(dim: usize, spread: f64, rng: &mut impl Rng) -> CMatrix {
    let u = random_unitary(dim, rng);
    let v = random_unitary(dim, rng);
    let ls = spread.ln();
    let s = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |_, _| {
        Complex64::new(rng.random_range(-ls..=ls).exp(), 0.0)
    }));
    u * s * v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{loewner_compare, symmetrize, TolerancePolicy};

    #[test]
    fn projection_pair_endpoints() {
        let (p, q) = gen_projection_pair(0.0).unwrap();
        assert_eq!(p, q);
        let (p, q) = gen_projection_pair(std::f64::consts::FRAC_PI_2).unwrap();
        assert!(q.max_abs_diff(&HermitianMatrix::from_diagonal(&[0.0, 1.0])) < 1e-16);
        let pq = p.matmul(&q);
        assert!(pq.norm() < 1e-16);
        assert!(gen_projection_pair(2.0).is_err());
    }

    #[test]
    fn projections_are_idempotent() {
        for k in 0..=10 {
            let (p, q) = gen_projection_pair(k as f64 * 0.15).unwrap();
            for m in [&p, &q] {
                let sq = symmetrize(&m.matmul(m)).unwrap();
                assert!(sq.max_abs_diff(m) < 1e-15);
            }
        }
    }

    #[test]
    fn pd_condition_number() {
        let a = gen_pd(5, 3, 1e4).unwrap();
        let ev = a.eigenvalues();
        assert!((ev[4] / ev[0] - 1e4).abs() < 1e-6 * 1e4);
        assert!(gen_pd(3, 0, 0.5).is_err());
        assert_eq!(gen_pd(4, 9, 10.0).unwrap(), gen_pd(4, 9, 10.0).unwrap());
    }

    #[test]
    fn dominated_pair_brackets() {
        let pol = TolerancePolicy::default();
        let f = std::f64::consts::SQRT_2;
        for seed in 0..20 {
            let (a, b) = gen_dominated_pair(3, seed, f).unwrap();
            assert!(loewner_compare(&a, &b, &pol).unwrap().is_le());
            assert!(loewner_compare(&b, &a.scale(f), &pol).unwrap().is_le());
        }
        assert!(gen_dominated_pair(3, 0, 1.0).is_err());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_from_seed(11);
        let u = random_unitary(6, &mut rng);
        let d = (u.adjoint() * &u - CMatrix::identity(6, 6)).norm();
        assert!(d < 1e-13);
    }

    #[test]
    fn derived_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
    }
}
