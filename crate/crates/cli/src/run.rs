use std::io::Write;

use anyhow::{Context, Result};
use gruss_core::{SuiteId, PRNG_VERSION};
use rayon::prelude::*;
use serde::Serialize;

use crate::cases::{enumerate, execute, Digest, FixedInput};
use crate::config::{Format, RunConfig};
use crate::Outcome;

/// Outcome of a single case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub suite: SuiteId,
    pub trial: u64,
    pub digest: String,
    pub holds: bool,
    pub worst_margin: Option<f64>,
    pub refinement_gain: Option<f64>,
    pub quadrature_error: Option<f64>,
    pub error: Option<String>,
    #[serde(skip)]
    pub numerical_error: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GainStats {
    pub min: Option<f64>,
    pub mean: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseError {
    pub digest: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub id: SuiteId,
    pub trials: u64,
    pub cases: usize,
    /// Digests of every case that failed or could not be evaluated.
    pub failures: Vec<String>,
    pub errors: Vec<CaseError>,
    pub worst_margin: Option<f64>,
    pub refinement_gain: GainStats,
    pub quadrature_error_max: f64,
    pub quadrature_error_total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub prng: &'static str,
    pub version: &'static str,
    pub suites: Vec<SuiteSummary>,
    #[serde(skip)]
    pub records: Vec<CaseRecord>,
}

impl RunReport {
    pub fn failure_count(&self) -> usize {
        self.suites.iter().map(|s| s.failures.len()).sum()
    }

    /// Failure beats non-convergence; a run with neither succeeds.
    pub fn outcome(&self) -> Outcome {
        let violated = self.records.iter().any(|r| !r.holds && !r.numerical_error);
        if violated {
            Outcome::Failure
        } else if self.records.iter().any(|r| r.numerical_error) {
            Outcome::NonConvergence
        } else {
            Outcome::Success
        }
    }

    pub fn suite(&self, id: SuiteId) -> Option<&SuiteSummary> {
        self.suites.iter().find(|s| s.id == id)
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                for r in &self.records {
                    w.serialize(r)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self, format: Format) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(buf)
    }
}

fn record(cfg: &RunConfig, ctx: &gruss_core::SuiteContext, fixed: &FixedInput, d: &Digest) -> CaseRecord {
    let mut rec = CaseRecord {
        suite: d.suite,
        trial: d.trial,
        digest: d.to_string(),
        holds: false,
        worst_margin: None,
        refinement_gain: None,
        quadrature_error: None,
        error: None,
        numerical_error: false,
    };
    match execute(cfg, ctx, fixed, d) {
        Ok(r) => {
            rec.holds = r.holds;
            rec.worst_margin = Some(r.worst_margin());
            rec.refinement_gain = Some(r.refinement_gain);
            rec.quadrature_error = Some(r.quadrature_error);
        }
        Err(e) => {
            rec.numerical_error = e.downcast_ref::<gruss_core::Error>().is_some_and(gruss_core::Error::is_numerical);
            rec.error = Some(format!("{e:#}"));
        }
    }
    rec
}

fn summarize(id: SuiteId, trials: u64, records: &[CaseRecord]) -> SuiteSummary {
    let mine: Vec<&CaseRecord> = records.iter().filter(|r| r.suite == id).collect();
    let gains: Vec<f64> = mine.iter().filter_map(|r| r.refinement_gain).collect();
    let min_of = |it: &mut dyn Iterator<Item = f64>| it.fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.min(x))));
    let errors = mine.iter().map(|r| r.quadrature_error.unwrap_or(0.0));
    SuiteSummary {
        id,
        trials,
        cases: mine.len(),
        failures: mine.iter().filter(|r| !r.holds).map(|r| r.digest.clone()).collect(),
        errors: mine
            .iter()
            .filter_map(|r| {
                r.error.as_ref().map(|m| CaseError {
                    digest: r.digest.clone(),
                    message: m.clone(),
                })
            })
            .collect(),
        worst_margin: min_of(&mut mine.iter().filter_map(|r| r.worst_margin)),
        refinement_gain: GainStats {
            min: min_of(&mut gains.iter().copied()),
            mean: (!gains.is_empty()).then(|| gains.iter().sum::<f64>() / gains.len() as f64),
        },
        quadrature_error_max: errors.clone().fold(0.0, f64::max),
        quadrature_error_total: errors.sum(),
    }
}

/// Runs every selected suite over `cfg.trials` seeded trials on a pool of
/// `workers` threads (0 means one per processor). Results are merged in
/// trial order, so the report does not depend on `workers`.
pub fn run_suites(cfg: &RunConfig, fixed: &FixedInput, workers: usize) -> Result<RunReport> {
    cfg.validate()?;
    if let Some(n) = fixed.dim()? {
        anyhow::ensure!(n == cfg.dim, "supplied matrices are {n}x{n} but --dim is {}", cfg.dim);
    }
    let ctx = cfg.context()?;
    let cases: Vec<Digest> = cfg
        .suites
        .iter()
        .flat_map(|&s| (0..cfg.trials).flat_map(move |t| enumerate(cfg, s, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("cannot start worker pool")?;
    let records: Vec<CaseRecord> = pool.install(|| cases.par_iter().map(|d| record(cfg, &ctx, fixed, d)).collect());
    let suites = cfg.suites.iter().map(|&id| summarize(id, cfg.trials, &records)).collect();
    Ok(RunReport {
        config: cfg.clone(),
        prng: PRNG_VERSION,
        version: env!("CARGO_PKG_VERSION"),
        suites,
        records,
    })
}
