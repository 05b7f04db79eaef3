//! Library behind the `gruss` binary: seeded suite runs, scalar sweeps, the
//! crossover explorer and single-case replay.

pub mod cases;
pub mod config;
pub mod run;
pub mod sweep;

use std::path::Path;

use anyhow::{Context, Result};
use gruss_core::{ComplexMatrix, InequalityReport};
use serde::Serialize;

pub use cases::{Digest, FixedInput};
pub use config::{Format, RunConfig};
pub use run::{run_suites, RunReport};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success = 0,
    Failure = 1,
    Usage = 2,
    NonConvergence = 3,
}

impl Outcome {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Reads a matrix in the `{"n", "re", "im"}` JSON format.
pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    ComplexMatrix::from_json_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplayReport {
    pub digest: String,
    pub prng: &'static str,
    pub report: InequalityReport,
}

/// Re-runs the single case named by `digest` under the tolerances of `cfg`.
pub fn replay(cfg: &RunConfig, fixed: &FixedInput, digest: &str) -> Result<ReplayReport> {
    let d: Digest = digest.parse()?;
    let cfg = RunConfig {
        suites: vec![d.suite],
        dim: d.dim,
        seed: d.seed,
        trials: d.trial + 1,
        ..cfg.clone()
    };
    cfg.validate()?;
    let ctx = cfg.context()?;
    let report = cases::execute(&cfg, &ctx, fixed, &d)?;
    Ok(ReplayReport {
        digest: d.to_string(),
        prng: gruss_core::PRNG_VERSION,
        report,
    })
}

/// Classifies an error from a command into an exit status.
pub fn classify(err: &anyhow::Error) -> Outcome {
    match err.downcast_ref::<gruss_core::Error>() {
        Some(e) if e.is_numerical() => Outcome::NonConvergence,
        _ => Outcome::Usage,
    }
}
