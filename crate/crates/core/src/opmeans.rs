//! Operator means and relative operator entropies of positive definite pairs.
//!
//! Except for the arithmetic and harmonic means, every quantity here has the
//! form A^{1/2} h(C) A^{1/2} with C = A^{−1/2} B A^{−1/2}. [`PositivePair`]
//! factors A and C once, so each mean costs one weighted outer-product sum.

use crate::error::{Error, Result};
use crate::linalg::{eigh, weighted_outer_sum, ComplexMatrix, HermitianMatrix, SpectralDecomposition};
use crate::means::{self, MeanKind, MeanParams};

/// Default strict-positivity witness for both members of a pair.
pub const DEFAULT_MIN_EIG_FLOOR: f64 = 1e-10;

/// Below this order, the Tsallis entropy is evaluated with the plain logarithm.
pub const ENTROPY_LOG_SWITCH: f64 = 1e-8;

/// Two positive definite matrices of equal dimension with cached factorizations.
#[derive(Clone, Debug)]
pub struct PositivePair {
    a: HermitianMatrix,
    b: HermitianMatrix,
    min_eig_floor: f64,
    eig_a: SpectralDecomposition,
    eig_b: SpectralDecomposition,
    /// Eigenvalues of C = A^{−1/2} B A^{−1/2}.
    relative: Vec<f64>,
    /// A^{1/2} U_C.
    w: ComplexMatrix,
    /// A^{−1/2} U_C.
    w_inv: ComplexMatrix,
}

impl PositivePair {
    pub fn new(a: HermitianMatrix, b: HermitianMatrix) -> Result<Self> {
        Self::with_floor(a, b, DEFAULT_MIN_EIG_FLOOR)
    }

    pub fn with_floor(a: HermitianMatrix, b: HermitianMatrix, min_eig_floor: f64) -> Result<Self> {
        a.as_matrix().same_dim(b.as_matrix())?;
        let eig_a = eigh(&a)?;
        let eig_b = eigh(&b)?;
        for d in [&eig_a, &eig_b] {
            if !(d.min_eigenvalue() >= min_eig_floor) {
                return Err(Error::NonPositiveInput {
                    operation: "PositivePair",
                    value: d.min_eigenvalue(),
                });
            }
        }
        let sqrt_a: Vec<f64> = eig_a.eigenvalues().iter().map(|x| x.sqrt()).collect();
        let a_half = eig_a.synthesize(&sqrt_a);
        let a_inv_half = eig_a.synthesize(&sqrt_a.iter().map(|s| 1.0 / s).collect::<Vec<_>>());
        let c = b.congruence(a_inv_half.as_matrix());
        let eig_c = eigh(&c)?;
        if let Some(&bad) = eig_c.eigenvalues().iter().find(|&&x| !(x > 0.0)) {
            return Err(Error::DomainViolation {
                function: "relative spectrum",
                eigenvalue: bad,
            });
        }
        let w = a_half.as_matrix() * eig_c.eigenvectors();
        let w_inv = a_inv_half.as_matrix() * eig_c.eigenvectors();
        Ok(Self {
            a,
            b,
            min_eig_floor,
            eig_a,
            eig_b,
            relative: eig_c.eigenvalues().to_vec(),
            w,
            w_inv,
        })
    }

    pub fn a(&self) -> &HermitianMatrix {
        &self.a
    }

    pub fn b(&self) -> &HermitianMatrix {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn min_eig_floor(&self) -> f64 {
        self.min_eig_floor
    }

    pub fn eig_a(&self) -> &SpectralDecomposition {
        &self.eig_a
    }

    pub fn eig_b(&self) -> &SpectralDecomposition {
        &self.eig_b
    }

    /// Spectrum of A^{−1/2} B A^{−1/2}, ascending.
    pub fn relative_spectrum(&self) -> &[f64] {
        &self.relative
    }

    /// A^{1/2} h(A^{−1/2} B A^{−1/2}) A^{1/2}.
    pub fn congruence(&self, h: impl Fn(f64) -> f64) -> HermitianMatrix {
        let values: Vec<f64> = self.relative.iter().map(|&x| h(x)).collect();
        weighted_outer_sum(&self.w, &values)
    }

    /// A^{−1/2} h(A^{−1/2} B A^{−1/2}) A^{−1/2}.
    pub fn inverse_congruence(&self, h: impl Fn(f64) -> f64) -> HermitianMatrix {
        let values: Vec<f64> = self.relative.iter().map(|&x| h(x)).collect();
        weighted_outer_sum(&self.w_inv, &values)
    }

    fn inverse_of(d: &SpectralDecomposition) -> HermitianMatrix {
        d.synthesize(&d.eigenvalues().iter().map(|x| 1.0 / x).collect::<Vec<_>>())
    }
}

/// The operator version of [`means::scalar_mean`].
pub fn op_mean(kind: MeanKind, pair: &PositivePair, params: MeanParams) -> Result<HermitianMatrix> {
    let (t, v) = (params.t(), params.v());
    match kind {
        MeanKind::Arith => Ok(pair.a.lerp(&pair.b, v)),
        MeanKind::Harm => {
            let inv_a = PositivePair::inverse_of(&pair.eig_a);
            let inv_b = PositivePair::inverse_of(&pair.eig_b);
            let s = inv_a.lerp(&inv_b, v);
            let d = eigh(&s)?;
            if let Some(&bad) = d.eigenvalues().iter().find(|&&x| !(x > 0.0)) {
                return Err(Error::DomainViolation {
                    function: "inverse",
                    eigenvalue: bad,
                });
            }
            Ok(PositivePair::inverse_of(&d))
        }
        MeanKind::Geom => Ok(pair.congruence(|x| means::geom(1.0, x, v))),
        MeanKind::Heron => {
            unit_t(kind, t)?;
            Ok(pair.congruence(|x| means::heron(1.0, x, t, v)))
        }
        MeanKind::Heinz => {
            unit_t(kind, t)?;
            Ok(pair.congruence(|x| means::heinz(1.0, x, t)))
        }
        MeanKind::Power => Ok(pair.congruence(|x| means::power(1.0, x, t, v))),
    }
}

fn unit_t(kind: MeanKind, t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{kind} requires t in [0, 1], got {t}")))
    }
}

/// Scalar kernel of S_p: x ↦ ln_p x, with ln below [`ENTROPY_LOG_SWITCH`].
pub fn entropy_kernel(p: f64, x: f64) -> f64 {
    if p < ENTROPY_LOG_SWITCH {
        x.ln()
    } else {
        means::deformed_log_unchecked(p, x)
    }
}

/// Tsallis relative operator entropy S_p(A|B); S_0 is the relative operator entropy.
pub fn relative_entropy(pair: &PositivePair, p: f64) -> Result<HermitianMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("entropy order p = {p} is outside [0, 1]")));
    }
    Ok(pair.congruence(|x| entropy_kernel(p, x)))
}

/// A^{1/2} f(A^{−1/2} B A^{−1/2}) A^{1/2} with f(x) = (x − 1)/ln x and f(1) = 1.
pub fn log_mean_op(pair: &PositivePair) -> HermitianMatrix {
    pair.congruence(|x| means::log_mean_unchecked(1.0, x))
}

/// (B − A) S_0(A|B)^{−1} A, or `None` when S_0 is numerically singular.
/// This product is not Hermitian unless A and B commute.
pub fn product_log_term(pair: &PositivePair) -> Option<ComplexMatrix> {
    if pair.relative.iter().any(|x| x.ln().abs() < 1e-8) {
        return None;
    }
    let s0_inv = pair.inverse_congruence(|x| 1.0 / x.ln());
    let diff = pair.b.sub(&pair.a);
    Some(&(diff.as_matrix() * s0_inv.as_matrix()) * pair.a.as_matrix())
}

/// ‖(B − A) S_0(A|B)^{−1} A − log_mean_op(A, B)‖_F when S_0 is invertible.
pub fn product_form_residual(pair: &PositivePair) -> Option<f64> {
    let product = product_log_term(pair)?;
    Some((&product - log_mean_op(pair).as_matrix()).frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::loewner_leq;
    use std::f64::consts::E;

    fn pair(a: &[f64], b: &[f64]) -> PositivePair {
        PositivePair::new(HermitianMatrix::from_real_diag(a), HermitianMatrix::from_real_diag(b)).unwrap()
    }

    fn dense_pair() -> PositivePair {
        let a = HermitianMatrix::from_real_rows(&[vec![2.0, 0.5, 0.1], vec![0.5, 1.5, -0.3], vec![0.1, -0.3, 1.0]]).unwrap();
        let b = HermitianMatrix::from_real_rows(&[vec![1.0, -0.2, 0.4], vec![-0.2, 3.0, 0.6], vec![0.4, 0.6, 2.5]]).unwrap();
        PositivePair::new(a, b).unwrap()
    }

    fn diag_close(h: &HermitianMatrix, expected: &[f64], tol: f64) {
        let e = HermitianMatrix::from_real_diag(expected);
        assert!(h.sub(&e).frobenius_norm() <= tol, "{h:?} vs {expected:?}");
    }

    #[test]
    fn geometric_mean_with_identity() {
        let g = op_mean(MeanKind::Geom, &pair(&[1.0, 1.0], &[4.0, 9.0]), MeanParams::weight(0.5).unwrap()).unwrap();
        diag_close(&g, &[2.0, 3.0], 1e-14);
    }

    #[test]
    fn power_at_minus_one_is_harmonic() {
        let p = dense_pair();
        for v in [0.0, 0.3, 0.8, 1.0] {
            let h = op_mean(MeanKind::Harm, &p, MeanParams::new(0.0, v).unwrap()).unwrap();
            let m = op_mean(MeanKind::Power, &p, MeanParams::new(-1.0, v).unwrap()).unwrap();
            let scale = 1.0 + h.frobenius_norm();
            assert!(h.sub(&m).frobenius_norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn every_mean_fixes_the_diagonal() {
        let p = dense_pair();
        let same = PositivePair::new(p.a().clone(), p.a().clone()).unwrap();
        for kind in MeanKind::ALL {
            let m = op_mean(kind, &same, MeanParams::new(0.4, 0.7).unwrap()).unwrap();
            assert!(m.sub(p.a()).frobenius_norm() <= 1e-10 * (1.0 + p.a().frobenius_norm()), "{kind}");
        }
    }

    #[test]
    fn arithmetic_geometric_harmonic_order() {
        let p = dense_pair();
        let params = MeanParams::weight(0.35).unwrap();
        let h = op_mean(MeanKind::Harm, &p, params).unwrap();
        let g = op_mean(MeanKind::Geom, &p, params).unwrap();
        let a = op_mean(MeanKind::Arith, &p, params).unwrap();
        assert!(loewner_leq(&h, &g).unwrap().holds);
        assert!(loewner_leq(&g, &a).unwrap().holds);
    }

    #[test]
    fn heron_rejects_negative_t() {
        let err = op_mean(MeanKind::Heron, &dense_pair(), MeanParams::new(-0.5, 0.5).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
    }

    #[test]
    fn entropy_examples() {
        diag_close(&relative_entropy(&pair(&[1.0, 1.0], &[E, 1.0]), 0.0).unwrap(), &[1.0, 0.0], 1e-15);
        diag_close(&relative_entropy(&pair(&[1.0, 1.0], &[4.0, 4.0]), 0.5).unwrap(), &[2.0, 2.0], 1e-14);
        let p = dense_pair();
        let same = PositivePair::new(p.b().clone(), p.b().clone()).unwrap();
        for order in [0.0, 0.3, 1.0] {
            assert!(relative_entropy(&same, order).unwrap().frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn log_mean_examples() {
        let e2 = E * E;
        diag_close(&log_mean_op(&pair(&[1.0, 1.0], &[e2, 1.0])), &[(e2 - 1.0) / 2.0, 1.0], 1e-14);
        diag_close(&log_mean_op(&pair(&[1.0, 2.0], &[4.0, 2.0])), &[3.0 / 4f64.ln(), 2.0], 1e-14);
    }

    #[test]
    fn product_log_term_matches_on_commuting_pairs() {
        let p = pair(&[1.0, 2.0, 0.5], &[4.0, 3.0, 7.0]);
        assert!(product_form_residual(&p).unwrap() < 1e-13);
        assert!(product_form_residual(&pair(&[1.0, 2.0], &[1.0, 5.0])).is_none());
    }

    #[test]
    fn rejects_non_positive_members() {
        let a = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        let b = HermitianMatrix::identity(2);
        assert!(matches!(PositivePair::new(a, b), Err(Error::NonPositiveInput { .. })));
        let c = HermitianMatrix::identity(3);
        assert!(matches!(
            PositivePair::new(HermitianMatrix::identity(2), c),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
