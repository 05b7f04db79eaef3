use std::fmt;
use std::str::FromStr;

use anyhow::{bail, ensure, Result};
use gruss_core::random::MAX_DIM;
use gruss_core::suites::{DEFAULT_SCALAR_REL_TOL, WeightDomain};
use gruss_core::{MonotoneWeight, QuadratureConfig, SuiteContext, SuiteId, WeightKind};
use serde::Serialize;

/// Eigenvalue range of generated positive definite matrices.
pub const SPECTRUM_RANGE: (f64, f64) = (0.1, 10.0);

/// Log-uniform range of scalar pairs (a, b).
pub const SCALAR_RANGE: (f64, f64) = (1e-3, 1e3);

/// Weight parameters v exercised by the weighted-mean suites.
pub const V_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Entropy orders exercised by OP_ENTROPY.
pub const S_GRID: [f64; 3] = [0.1, 0.5, 1.0];

/// Unit vectors drawn per matrix in the KITTANEH suite.
pub const KITTANEH_SAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}; expected json or csv")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Parses `ALL` or a comma-separated list of suite ids.
pub fn parse_suites(s: &str) -> Result<Vec<SuiteId>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part.eq_ignore_ascii_case("ALL") {
            return Ok(SuiteId::ALL.to_vec());
        }
        let id: SuiteId = part.parse().map_err(|e| format!("{e}"))?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    if out.is_empty() {
        return Err("no suite selected".into());
    }
    Ok(out)
}

/// Parses a comma-separated list of weight kinds such as `IDENTITY,POWER:3`.
pub fn parse_weights(s: &str) -> Result<Vec<WeightKind>, String> {
    let weights = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<WeightKind>().map_err(|e| format!("{e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if weights.is_empty() {
        return Err("no weight selected".into());
    }
    Ok(weights)
}

/// Everything that determines the content of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub suites: Vec<SuiteId>,
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol_psd: f64,
    pub tol_scalar: f64,
    pub quad_atol: f64,
    pub quad_rtol: f64,
    pub weights: Vec<WeightKind>,
    pub format: Format,
    pub spectrum: (f64, f64),
    pub scalar_range: (f64, f64),
}

impl Default for RunConfig {
    fn default() -> Self {
        let quad = QuadratureConfig::default();
        Self {
            suites: SuiteId::ALL.to_vec(),
            dim: 4,
            trials: 100,
            seed: 0,
            tol_psd: gruss_core::linalg::DEFAULT_PSD_REL_TOL,
            tol_scalar: DEFAULT_SCALAR_REL_TOL,
            quad_atol: quad.atol,
            quad_rtol: quad.rtol,
            weights: WeightKind::DEFAULTS.to_vec(),
            format: Format::Json,
            spectrum: SPECTRUM_RANGE,
            scalar_range: SCALAR_RANGE,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(!self.suites.is_empty(), "no suite selected");
        ensure!(self.trials >= 1, "trials must be at least 1");
        ensure!((1..=MAX_DIM).contains(&self.dim), "dim must be in [1, {MAX_DIM}], got {}", self.dim);
        for (name, v) in [
            ("tol-psd", self.tol_psd),
            ("quad-atol", self.quad_atol),
            ("quad-rtol", self.quad_rtol),
        ] {
            ensure!(v > 0.0 && v.is_finite(), "{name} must be positive and finite, got {v}");
        }
        ensure!(!self.weights.is_empty(), "no weight selected");
        for &kind in &self.weights {
            for domain in [WeightDomain::Unit, WeightDomain::UpperHalf, WeightDomain::NegUnit] {
                if let Err(e) = MonotoneWeight::new(kind, domain) {
                    bail!("weight {kind} is unusable on {domain}: {e}");
                }
            }
        }
        Ok(())
    }

    pub fn context(&self) -> Result<SuiteContext> {
        let quad = QuadratureConfig {
            atol: self.quad_atol,
            rtol: self.quad_rtol,
            ..QuadratureConfig::default()
        };
        let mut ctx = SuiteContext::new(quad, self.tol_psd)?;
        ctx.scalar_rel = self.tol_scalar;
        Ok(ctx)
    }
}
