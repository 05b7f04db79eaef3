//! Numerical kernels for refined mean and covariance inequalities on
//! Hermitian matrices.
//!
//! [`linalg`] provides complex Hermitian matrices, a Jacobi eigensolver and
//! spectral functional calculus. [`means`] and [`opmeans`] evaluate scalar
//! and operator means, [`quadrature`] integrates scalar or matrix-valued
//! functions, and [`suites`] and [`covariance`] turn them into checkers that
//! return an [`InequalityReport`]. [`random`] produces reproducible
//! instances from a 64-bit seed.

pub mod covariance;
pub mod error;
pub mod linalg;
pub mod means;
pub mod opmeans;
pub mod quadrature;
pub mod random;
pub mod suites;

pub use covariance::{numerical_radius, CovarianceTerms, SpectrumBounds};
pub use error::{Error, Result};
pub use linalg::{eigh, ComplexMatrix, HermitianMatrix, LoewnerReport, MatrixJson, SpectralDecomposition, UnitVector};
pub use means::{MeanKind, MeanParams};
pub use opmeans::PositivePair;
pub use quadrature::{Integrator, QuadratureConfig};
pub use random::{InstanceConfig, SplitMix64, PRNG_VERSION};
pub use suites::{InequalityReport, Link, MonotoneWeight, SuiteContext, SuiteFamily, SuiteId, WeightDomain, WeightKind};
