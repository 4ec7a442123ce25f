//! Binary matrix means: arithmetic, geometric, harmonic, the mean induced
//! by a normalized function `f`, parallel sums, projection meets and the
//! symmetric means given by a discrete representing measure.

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermitian::{
    apply_to_spectrum, pd_inverse, pd_sqrt_pair, pseudo_inverse, require_psd,
    sandwich, spectral_decompose, symmetrize, HermitianMatrix, TolerancePolicy,
};

pub use crate::function::{ScalarFunction, Table};

fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(())
}

/// `A∇B = (A + B)/2`.
pub fn arithmetic_mean(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(a.try_add(b)?.scale(0.5))
}

/// `A^{1/2} g(A^{-1/2} B A^{-1/2}) A^{1/2}` for positive definite `A`.
fn kubo_ando_with(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    g: impl FnOnce(&HermitianMatrix) -> Result<HermitianMatrix>,
) -> Result<HermitianMatrix> {
    same_dim(a, b)?;
    let (half, inv_half) = pd_sqrt_pair(a)?;
    let inner = sandwich(&inv_half, b)?;
    sandwich(&half, &g(&inner)?)
}

/// `A♯B = A^{1/2}(A^{-1/2}BA^{-1/2})^{1/2}A^{1/2}`; `A` must be positive definite.
pub fn geometric_mean(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    require_psd(b)?;
    kubo_ando_with(a, b, crate::hermitian::psd_sqrt)
}

/// `A!B = 2(A^{-1} + B^{-1})^{-1}`.
pub fn harmonic_mean(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    same_dim(a, b)?;
    let sum = pd_inverse(a)?.try_add(&pd_inverse(b)?)?;
    Ok(pd_inverse(&sum)?.scale(2.0))
}

/// The Kubo–Ando mean `A σ_f B` of a normalized function `f`.
pub fn f_mean(f: &ScalarFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    f.require_normalized()?;
    require_psd(b)?;
    kubo_ando_with(a, b, |c| apply_to_spectrum(f, &spectral_decompose(c)?))
}

/// Parallel sum `A:B`, computed as `A(A + B)^+B` on positive semidefinite input.
pub fn parallel_sum(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    same_dim(a, b)?;
    require_psd(a)?;
    require_psd(b)?;
    let sum = a.try_add(b)?;
    let tol = TolerancePolicy::default().effective(&[&sum]);
    let pinv = pseudo_inverse(&sum, tol)?;
    symmetrize(&(a.as_matrix() * pinv.as_matrix() * b.as_matrix()))
}

fn require_projection(p: &HermitianMatrix) -> Result<()> {
    let sq = symmetrize(&p.matmul(p))?;
    let defect = sq.max_abs_diff(p);
    let tol = TolerancePolicy::default().from_scale(1.0_f64.max(p.spectral_norm()));
    if defect > tol {
        return Err(Error::NotProjection { defect, tol });
    }
    Ok(())
}

/// `P∧Q`: the spectral projection of `P + Q` onto the eigenvalue 2.
pub fn projection_meet(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<HermitianMatrix> {
    same_dim(p, q)?;
    require_projection(p)?;
    require_projection(q)?;
    let spec = spectral_decompose(&p.try_add(q)?)?;
    let tol = TolerancePolicy::default().from_scale(2.0);
    Ok(spec.map(|l| if (l - 2.0).abs() <= tol { 1.0 } else { 0.0 }))
}

/// Point mass of the representing measure: weight `w` at `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub lambda: f64,
    pub w: f64,
}

/// Description of a binary mean.
#[derive(Debug, Clone)]
pub enum MeanRepresentation {
    Arithmetic,
    Geometric,
    Harmonic,
    FInduced(ScalarFunction),
    /// Symmetric mean with weight `alpha` on `∇` and atoms on `(0, ∞)`.
    Discrete { alpha: f64, atoms: Vec<Atom> },
}

impl MeanRepresentation {
    pub fn discrete(alpha: f64, atoms: Vec<Atom>) -> Result<Self> {
        let rep = Self::Discrete { alpha, atoms };
        rep.validate()?;
        Ok(rep)
    }

    /// Random normalized discrete representation with up to `max_atoms` atoms.
    pub fn random_discrete(rng: &mut impl Rng, max_atoms: usize) -> Self {
        let n = rng.random_range(0..=max_atoms);
        let alpha_raw: f64 = if n == 0 { 1.0 } else { rng.random_range(0.0..1.0) };
        let mut atoms: Vec<Atom> = (0..n)
            .map(|_| Atom {
                lambda: 10f64.powf(rng.random_range(-2.0..=2.0)),
                w: rng.random_range(0.05..1.0),
            })
            .collect();
        let total = alpha_raw + atoms.iter().map(|a| a.w).sum::<f64>();
        for a in &mut atoms {
            a.w /= total;
        }
        let alpha = 1.0 - atoms.iter().map(|a| a.w).sum::<f64>();
        Self::Discrete { alpha, atoms }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::FInduced(f) => f.require_normalized(),
            Self::Discrete { alpha, atoms } => {
                if !(0.0..=1.0).contains(alpha) {
                    return Err(Error::InvalidRepresentation(format!(
                        "alpha = {alpha} must lie in [0, 1]"
                    )));
                }
                for a in atoms {
                    if !(a.lambda > 0.0 && a.lambda.is_finite() && a.w > 0.0 && a.w.is_finite()) {
                        return Err(Error::InvalidRepresentation(format!(
                            "atom (lambda = {}, w = {}) needs lambda > 0 and w > 0",
                            a.lambda, a.w
                        )));
                    }
                }
                let total = alpha + atoms.iter().map(|a| a.w).sum::<f64>();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidRepresentation(format!(
                        "alpha + sum of weights = {total}, expected 1"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Arithmetic => "arithmetic".into(),
            Self::Geometric => "geometric".into(),
            Self::Harmonic => "harmonic".into(),
            Self::FInduced(f) => format!("f_induced({})", f.label()),
            Self::Discrete { alpha, atoms } => format!("discrete(alpha={alpha}, atoms={})", atoms.len()),
        }
    }

    /// `A σ B`.
    pub fn apply(&self, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
        match self {
            Self::Arithmetic => arithmetic_mean(a, b),
            Self::Geometric => geometric_mean(a, b),
            Self::Harmonic => harmonic_mean(a, b),
            Self::FInduced(f) => f_mean(f, a, b),
            Self::Discrete { .. } => discrete_symmetric_mean(self, a, b),
        }
    }
}

/// `(α/2)(A + B) + Σ w_i (λ_i + 1)/(2λ_i) [(λ_i A):B + A:(λ_i B)]`.
///
/// The factor `1/2` on the atom terms makes `I σ I = I` for every
/// normalized representation.
pub fn discrete_symmetric_mean(
    rep: &MeanRepresentation,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    let MeanRepresentation::Discrete { alpha, atoms } = rep else {
        return Err(Error::InvalidRepresentation(format!(
            "expected a discrete representation, got {}",
            rep.name()
        )));
    };
    rep.validate()?;
    same_dim(a, b)?;
    require_psd(a)?;
    require_psd(b)?;
    let mut acc = a.try_add(b)?.scale(alpha / 2.0);
    for atom in atoms {
        let l = atom.lambda;
        let term = parallel_sum(&a.scale(l), b)?.try_add(&parallel_sum(a, &b.scale(l))?)?;
        acc = acc.try_add(&term.scale(atom.w * (l + 1.0) / (2.0 * l)))?;
    }
    Ok(acc)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RepJson {
    Arithmetic,
    Geometric,
    Harmonic,
    FInduced { function: String },
    Discrete { alpha: f64, atoms: Vec<Atom> },
}

impl Serialize for MeanRepresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match self {
            Self::Arithmetic => RepJson::Arithmetic,
            Self::Geometric => RepJson::Geometric,
            Self::Harmonic => RepJson::Harmonic,
            Self::FInduced(f) => RepJson::FInduced {
                function: f.label().to_string(),
            },
            Self::Discrete { alpha, atoms } => RepJson::Discrete {
                alpha: *alpha,
                atoms: atoms.clone(),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeanRepresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rep = match RepJson::deserialize(d)? {
            RepJson::Arithmetic => Self::Arithmetic,
            RepJson::Geometric => Self::Geometric,
            RepJson::Harmonic => Self::Harmonic,
            RepJson::FInduced { function } => {
                Self::FInduced(ScalarFunction::from_name(&function).map_err(D::Error::custom)?)
            }
            RepJson::Discrete { alpha, atoms } => Self::Discrete { alpha, atoms },
        };
        rep.validate().map_err(D::Error::custom)?;
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_projection_pair, rng_from_seed};
    use crate::hermitian::psd_sqrt;

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diagonal(v)
    }

    fn close(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn arithmetic_examples() {
        let i = HermitianMatrix::identity(2);
        assert_eq!(arithmetic_mean(&i, &i).unwrap(), i);
        assert_eq!(arithmetic_mean(&diag(&[1., 3.]), &diag(&[3., 1.])).unwrap(), diag(&[2., 2.]));
        assert_eq!(arithmetic_mean(&diag(&[2.]), &diag(&[4.])).unwrap(), diag(&[3.]));
        assert!(arithmetic_mean(&i, &HermitianMatrix::identity(3)).is_err());
    }

    #[test]
    fn geometric_examples() {
        let b = HermitianMatrix::from_real_rows(&[&[2., 1.], &[1., 2.]]).unwrap();
        let g = geometric_mean(&HermitianMatrix::identity(2), &b).unwrap();
        assert!(close(&g, &psd_sqrt(&b).unwrap(), 1e-14));
        assert!(close(&geometric_mean(&diag(&[4.]), &diag(&[9.])).unwrap(), &diag(&[6.]), 1e-14));
        let g = geometric_mean(&diag(&[1., 2.]), &diag(&[4., 8.])).unwrap();
        assert!(close(&g, &diag(&[2., 4.]), 1e-14));
        assert!(matches!(
            geometric_mean(&diag(&[1., 0.]), &diag(&[1., 1.])),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn harmonic_examples() {
        let i = HermitianMatrix::identity(2);
        assert!(close(&harmonic_mean(&i, &i).unwrap(), &i, 1e-15));
        assert!(close(&harmonic_mean(&diag(&[1.]), &diag(&[3.])).unwrap(), &diag(&[1.5]), 1e-15));
        assert!(harmonic_mean(&diag(&[1., 0.]), &i).is_err());
    }

    #[test]
    fn f_mean_examples() {
        let f = ScalarFunction::arithmetic();
        let r = f_mean(&f, &diag(&[1., 2.]), &diag(&[3., 4.])).unwrap();
        assert!(close(&r, &diag(&[2., 3.]), 1e-14));

        let e2 = std::f64::consts::E.powi(2);
        let r = f_mean(&ScalarFunction::logmean(), &diag(&[1.]), &diag(&[e2])).unwrap();
        assert!((r.entry(0, 0).re - (e2 - 1.0) / 2.0).abs() < 1e-13);
        assert!((r.entry(0, 0).re - 3.194528).abs() < 1e-6);

        assert!(matches!(
            f_mean(&ScalarFunction::exp(), &diag(&[1.]), &diag(&[2.])),
            Err(Error::Unnormalized { .. })
        ));
    }

    #[test]
    fn parallel_sum_examples() {
        assert!(close(&parallel_sum(&diag(&[2.]), &diag(&[2.])).unwrap(), &diag(&[1.]), 1e-15));
        let (p, q) = gen_projection_pair(0.7).unwrap();
        assert!(close(&parallel_sum(&p, &p).unwrap(), &p.scale(0.5), 1e-15));
        for l in [0.1, 1.0, 7.0] {
            let r = parallel_sum(&p.scale(l), &q).unwrap();
            assert!(r.spectral_norm() < 1e-12, "lambda {l}: {r:?}");
        }
    }

    #[test]
    fn parallel_sum_projection_identity_on_shared_range() {
        // (λP):P = λ/(λ+1) P∧P
        let (p, _) = gen_projection_pair(0.3).unwrap();
        for l in [0.5, 2.0, 10.0] {
            let r = parallel_sum(&p.scale(l), &p).unwrap();
            assert!(close(&r, &p.scale(l / (l + 1.0)), 1e-14));
            let r2 = parallel_sum(&p, &p.scale(l)).unwrap();
            assert!(close(&r2, &r, 1e-14));
        }
    }

    #[test]
    fn projection_meet_examples() {
        let (p, q) = gen_projection_pair(0.4).unwrap();
        assert!(close(&projection_meet(&p, &p).unwrap(), &p, 1e-14));
        assert!(projection_meet(&p, &q).unwrap().spectral_norm() < 1e-14);
        let i = HermitianMatrix::identity(2);
        assert!(close(&projection_meet(&i, &q).unwrap(), &q, 1e-14));
        assert!(matches!(
            projection_meet(&diag(&[2., 0.]), &p),
            Err(Error::NotProjection { .. })
        ));
    }

    #[test]
    fn discrete_examples() {
        let a = HermitianMatrix::from_real_rows(&[&[2., 0.5], &[0.5, 1.]]).unwrap();
        let b = HermitianMatrix::from_real_rows(&[&[1., -0.3], &[-0.3, 3.]]).unwrap();

        let arith = MeanRepresentation::discrete(1.0, vec![]).unwrap();
        assert!(close(&arith.apply(&a, &b).unwrap(), &arithmetic_mean(&a, &b).unwrap(), 1e-15));

        let harm = MeanRepresentation::discrete(0.0, vec![Atom { lambda: 1.0, w: 1.0 }]).unwrap();
        assert!(close(&harm.apply(&a, &b).unwrap(), &harmonic_mean(&a, &b).unwrap(), 1e-13));

        let mut rng = rng_from_seed(5);
        let i = HermitianMatrix::identity(3);
        for _ in 0..20 {
            let rep = MeanRepresentation::random_discrete(&mut rng, 4);
            assert!(close(&rep.apply(&i, &i).unwrap(), &i, 1e-10));
        }
    }

    #[test]
    fn discrete_on_meet_zero_projections_is_scaled_sum() {
        let (p, q) = gen_projection_pair(0.9).unwrap();
        let rep = MeanRepresentation::discrete(
            0.4,
            vec![Atom { lambda: 0.5, w: 0.35 }, Atom { lambda: 3.0, w: 0.25 }],
        )
        .unwrap();
        let r = rep.apply(&p, &q).unwrap();
        assert!(close(&r, &p.try_add(&q).unwrap().scale(0.2), 1e-12));
    }

    #[test]
    fn discrete_rejects_unnormalized() {
        assert!(matches!(
            MeanRepresentation::discrete(0.5, vec![Atom { lambda: 1.0, w: 0.6 }]),
            Err(Error::InvalidRepresentation(_))
        ));
        assert!(MeanRepresentation::discrete(0.5, vec![Atom { lambda: -1.0, w: 0.5 }]).is_err());
        let i = HermitianMatrix::identity(2);
        let bad = MeanRepresentation::Discrete {
            alpha: 0.2,
            atoms: vec![],
        };
        assert!(discrete_symmetric_mean(&bad, &i, &i).is_err());
        assert!(discrete_symmetric_mean(&MeanRepresentation::Geometric, &i, &i).is_err());
    }

    #[test]
    fn representation_json() {
        let rep: MeanRepresentation = serde_json::from_str(
            r#"{"kind": "discrete", "alpha": 0.5, "atoms": [{"lambda": 1.0, "w": 0.5}]}"#,
        )
        .unwrap();
        assert!(matches!(rep, MeanRepresentation::Discrete { alpha, .. } if alpha == 0.5));
        let s = serde_json::to_string(&rep).unwrap();
        assert_eq!(s, r#"{"kind":"discrete","alpha":0.5,"atoms":[{"lambda":1.0,"w":0.5}]}"#);

        let g: MeanRepresentation = serde_json::from_str(r#"{"kind":"geometric"}"#).unwrap();
        assert!(matches!(g, MeanRepresentation::Geometric));
        let f: MeanRepresentation =
            serde_json::from_str(r#"{"kind":"f_induced","function":"power:0.3"}"#).unwrap();
        assert_eq!(f.name(), "f_induced(power:0.3)");

        let bad: std::result::Result<MeanRepresentation, _> =
            serde_json::from_str(r#"{"kind":"discrete","alpha":0.9,"atoms":[]}"#);
        assert!(bad.is_err());
        let bad: std::result::Result<MeanRepresentation, _> =
            serde_json::from_str(r#"{"kind":"f_induced","function":"exp"}"#);
        assert!(bad.is_err());
    }
}
