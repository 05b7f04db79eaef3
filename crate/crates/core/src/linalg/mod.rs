//! Dense complex matrices, the Hermitian eigensolver, functional calculus and
//! the Loewner order.

mod eigen;
mod funcalc;
mod matrix;
mod order;
mod vector;

pub use eigen::{eigh, eigh_with, JacobiConfig, SpectralDecomposition};
pub(crate) use eigen::weighted_outer_sum;
pub use funcalc::{
    apply_function, apply_to_decomposition, default_domain_tol, invm, logm, map_spectrum, powm, sqrtm, Domain, ScalarFn,
};
pub use matrix::{inner, vector_norm, ComplexMatrix, HermitianMatrix, MatrixJson, DEFAULT_HERMITIAN_TOL};
pub use order::{
    abs_op, default_psd_tol, gram, hermitian_norm, loewner_leq, loewner_leq_with_tol, operator_norm, psd_tol,
    LoewnerReport, DEFAULT_PSD_REL_TOL,
};
pub use vector::UnitVector;
