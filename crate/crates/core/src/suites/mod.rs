//! Checkers for the scalar and operator refinement inequalities.
//!
//! Each checker evaluates both sides of one inequality (or of each link in
//! a chain) and returns an [`InequalityReport`]. Scalar links pass when
//! `rhs − lhs ≥ −(scalar_rel·(1 + |rhs|) + quadrature error)`; operator
//! links pass when λ_min(RHS − LHS) ≥ −(psd tolerance + quadrature error).

mod crossover;
mod operator;
mod report;
mod scalar;
mod weight;

pub use crossover::{
    compare_eq6_eq7, check_eq6_eq7, crossover_summary, eq6_eq7_gap, find_ordering_crossovers, CrossoverSummary,
    Eq67Record, Verdict, CLAIMED_CROSSOVER,
};
pub use operator::check_operator_refinement;
pub use report::{InequalityReport, Link, SuiteFamily, SuiteId};
pub use scalar::{check_gruss_base, check_scalar_counterpart, check_scalar_refinement, cor3_correction};
pub use weight::{MonotoneWeight, WeightDomain, WeightKind, MONOTONE_GRID};

use crate::error::Result;
use crate::linalg::{psd_tol, HermitianMatrix, DEFAULT_PSD_REL_TOL};
use crate::quadrature::{Integrator, QuadratureConfig};

/// Relative slack of scalar links.
pub const DEFAULT_SCALAR_REL_TOL: f64 = 1e-10;

/// Tolerances and the quadrature rule shared by all checkers.
#[derive(Clone, Debug)]
pub struct SuiteContext {
    integrator: Integrator,
    /// Coefficient of 1 + ‖X‖₂ + ‖Y‖₂ in the Loewner tolerance.
    pub psd_rel: f64,
    /// Coefficient of 1 + |rhs| in the scalar tolerance.
    pub scalar_rel: f64,
}

impl Default for SuiteContext {
    fn default() -> Self {
        Self {
            integrator: Integrator::default(),
            psd_rel: DEFAULT_PSD_REL_TOL,
            scalar_rel: DEFAULT_SCALAR_REL_TOL,
        }
    }
}

impl SuiteContext {
    pub fn new(quadrature: QuadratureConfig, psd_rel: f64) -> Result<Self> {
        Ok(Self {
            integrator: Integrator::new(quadrature)?,
            psd_rel,
            scalar_rel: DEFAULT_SCALAR_REL_TOL,
        })
    }

    pub fn integrator(&self) -> &Integrator {
        &self.integrator
    }

    pub fn scalar_tol(&self, rhs: f64, quad_err: f64) -> f64 {
        self.scalar_rel * (1.0 + rhs.abs()) + quad_err
    }

    pub fn psd_tol(&self, x: &HermitianMatrix, y: &HermitianMatrix, quad_err: f64) -> Result<f64> {
        Ok(psd_tol(x, y, self.psd_rel)? + quad_err)
    }
}
