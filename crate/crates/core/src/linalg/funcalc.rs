use super::eigen::{eigh, SpectralDecomposition};
use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};

/// Interval on which a scalar function is defined. An open lower end excludes
/// the boundary itself (e.g. `ln` on (0, ∞)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
}

impl Domain {
    pub const REAL: Domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_open: false,
    };
    pub const NON_NEGATIVE: Domain = Domain {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_open: false,
    };
    pub const POSITIVE: Domain = Domain {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_open: true,
    };

    /// Domain of x ↦ x^p.
    pub fn power(p: f64) -> Domain {
        if p > 0.0 {
            Domain::NON_NEGATIVE
        } else {
            Domain::POSITIVE
        }
    }

    /// Maps `x` into the domain, clamping values within `tol` of a closed end.
    fn admit(&self, x: f64, tol: f64) -> Option<f64> {
        if x > self.hi + tol {
            return None;
        }
        let x = x.min(self.hi);
        if self.lo_open {
            return (x > self.lo).then_some(x);
        }
        if x < self.lo - tol {
            return None;
        }
        Some(x.max(self.lo))
    }
}

/// A real scalar function together with its domain.
#[derive(Clone, Copy)]
pub struct ScalarFn<'a> {
    pub name: &'static str,
    pub domain: Domain,
    pub eval: &'a dyn Fn(f64) -> f64,
}

impl<'a> ScalarFn<'a> {
    pub fn new(name: &'static str, domain: Domain, eval: &'a dyn Fn(f64) -> f64) -> Self {
        Self { name, domain, eval }
    }
}

/// Boundary clamping tolerance 1e-12·(1 + ‖H‖₂).
pub fn default_domain_tol(d: &SpectralDecomposition) -> f64 {
    1e-12 * (1.0 + d.spectral_radius())
}

/// U f(Λ) U*.
pub fn apply_function(h: &HermitianMatrix, f: ScalarFn<'_>) -> Result<HermitianMatrix> {
    let d = eigh(h)?;
    apply_to_decomposition(&d, f)
}

pub fn apply_to_decomposition(d: &SpectralDecomposition, f: ScalarFn<'_>) -> Result<HermitianMatrix> {
    let values = map_spectrum(d, f, default_domain_tol(d))?;
    Ok(d.synthesize(&values))
}

/// f applied to each eigenvalue after domain admission.
pub fn map_spectrum(d: &SpectralDecomposition, f: ScalarFn<'_>, tol: f64) -> Result<Vec<f64>> {
    d.eigenvalues()
        .iter()
        .map(|&lambda| {
            let x = f.domain.admit(lambda, tol).ok_or(Error::DomainViolation {
                function: f.name,
                eigenvalue: lambda,
            })?;
            Ok((f.eval)(x))
        })
        .collect()
}

pub fn sqrtm(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_function(h, ScalarFn::new("sqrt", Domain::NON_NEGATIVE, &f64::sqrt))
}

pub fn logm(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_function(h, ScalarFn::new("ln", Domain::POSITIVE, &f64::ln))
}

pub fn powm(h: &HermitianMatrix, p: f64) -> Result<HermitianMatrix> {
    apply_function(h, ScalarFn::new("power", Domain::power(p), &move |x: f64| x.powf(p)))
}

/// Inverse of a positive definite matrix.
pub fn invm(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_function(h, ScalarFn::new("inverse", Domain::POSITIVE, &|x: f64| 1.0 / x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_diagonal() {
        let r = sqrtm(&HermitianMatrix::from_real_diag(&[4.0, 9.0])).unwrap();
        assert_eq!(r, HermitianMatrix::from_real_diag(&[2.0, 3.0]));
    }

    #[test]
    fn log_of_identity_is_zero() {
        let r = logm(&HermitianMatrix::identity(3)).unwrap();
        assert_eq!(r.frobenius_norm(), 0.0);
    }

    #[test]
    fn log_of_singular_matrix_is_a_domain_violation() {
        let err = logm(&HermitianMatrix::from_real_diag(&[1.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::DomainViolation { function: "ln", .. }));
    }

    #[test]
    fn sqrt_clamps_tiny_negative_eigenvalues() {
        let r = sqrtm(&HermitianMatrix::from_real_diag(&[1.0, -1e-14])).unwrap();
        assert_eq!(r, HermitianMatrix::from_real_diag(&[1.0, 0.0]));
        assert!(sqrtm(&HermitianMatrix::from_real_diag(&[1.0, -1e-6])).is_err());
    }

    #[test]
    fn inverse_requires_positive_spectrum() {
        let r = invm(&HermitianMatrix::from_real_diag(&[2.0, 4.0])).unwrap();
        assert_eq!(r, HermitianMatrix::from_real_diag(&[0.5, 0.25]));
        assert!(invm(&HermitianMatrix::from_real_diag(&[-2.0, 4.0])).is_err());
    }
}
