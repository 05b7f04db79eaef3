use serde::Serialize;

use super::eigen::eigh;
use super::funcalc::sqrtm;
use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::Result;

/// Outcome of testing X ⪯ Y.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoewnerReport {
    /// Smallest eigenvalue of Y − X.
    pub min_eig_diff: f64,
    pub tol: f64,
    pub holds: bool,
}

impl LoewnerReport {
    pub fn new(min_eig_diff: f64, tol: f64) -> Self {
        Self {
            min_eig_diff,
            tol,
            holds: min_eig_diff >= -tol,
        }
    }
}

/// Relative PSD slack used when no explicit tolerance is given.
pub const DEFAULT_PSD_REL_TOL: f64 = 1e-9;

/// 1e-9·(1 + ‖X‖₂ + ‖Y‖₂).
pub fn default_psd_tol(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    psd_tol(x, y, DEFAULT_PSD_REL_TOL)
}

pub fn psd_tol(x: &HermitianMatrix, y: &HermitianMatrix, rel: f64) -> Result<f64> {
    Ok(rel * (1.0 + hermitian_norm(x)? + hermitian_norm(y)?))
}

/// X ⪯ Y with the default tolerance.
pub fn loewner_leq(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<LoewnerReport> {
    let tol = default_psd_tol(x, y)?;
    loewner_leq_with_tol(x, y, tol)
}

pub fn loewner_leq_with_tol(x: &HermitianMatrix, y: &HermitianMatrix, tol: f64) -> Result<LoewnerReport> {
    x.as_matrix().same_dim(y.as_matrix())?;
    let diff = eigh(&y.sub(x))?;
    Ok(LoewnerReport::new(diff.min_eigenvalue(), tol))
}

/// Spectral norm of a Hermitian matrix, max |λ|.
pub fn hermitian_norm(h: &HermitianMatrix) -> Result<f64> {
    Ok(eigh(h)?.spectral_radius())
}

/// M*M as a Hermitian matrix.
pub fn gram(m: &ComplexMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(&m.adjoint() * m)
}

/// |T| = (T*T)^{1/2}.
pub fn abs_op(t: &ComplexMatrix) -> Result<HermitianMatrix> {
    sqrtm(&gram(t))
}

/// Largest singular value, √λ_max(M*M).
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigh(&gram(m))?.max_eigenvalue().max(0.0).sqrt())
}
