use std::io::Write;

use anyhow::{bail, ensure, Result};
use gruss_core::suites::{
    check_eq6_eq7, check_scalar_refinement, compare_eq6_eq7, crossover_summary, CrossoverSummary,
};
use gruss_core::{MonotoneWeight, SuiteContext, SuiteId, WeightDomain, WeightKind};
use serde::Serialize;

/// Log-spaced abscissae; a single point when `lo == hi`.
pub fn log_points(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    ensure!(lo > 0.0 && lo.is_finite() && hi.is_finite(), "range [{lo}, {hi}] must be positive and finite");
    ensure!(lo <= hi, "range [{lo}, {hi}] is reversed");
    ensure!(points >= 1, "need at least one point");
    if lo == hi {
        return Ok(vec![lo]);
    }
    ensure!(points >= 2, "a non-degenerate range needs at least two points");
    let (l0, l1) = (lo.ln(), hi.ln());
    let step = (l1 - l0) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == points => hi,
            _ => (l0 + step * i as f64).exp(),
        })
        .collect())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub weight: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
    pub refinement_gain: f64,
    /// Extra terms, only filled by EQ6_EQ7.
    pub lhs6: Option<f64>,
    pub lhs7: Option<f64>,
    pub ordering: Option<i8>,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub suite: SuiteId,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// Weight parameter of THM1; the other suites fix it at 1/2.
    pub v: f64,
    pub weights: Vec<WeightKind>,
}

/// Evaluates a scalar suite at a = 1, b = x over log-spaced x. Each row
/// carries the tightest link of the check.
pub fn sweep(ctx: &SuiteContext, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let xs = log_points(spec.lo, spec.hi, spec.points)?;
    let mut rows = Vec::new();
    match spec.suite {
        SuiteId::Eq6Eq7 => {
            for &x in &xs {
                let rec = compare_eq6_eq7(x)?;
                let report = check_eq6_eq7(ctx, x)?;
                let tight = report
                    .links
                    .iter()
                    .min_by(|a, b| a.margin.total_cmp(&b.margin))
                    .expect("two links");
                rows.push(SweepRow {
                    x,
                    lhs: tight.lhs.unwrap_or(f64::NAN),
                    rhs: rec.rhs,
                    margin: tight.margin,
                    holds: report.holds,
                    lhs6: Some(rec.lhs6),
                    lhs7: Some(rec.lhs7),
                    ordering: Some(rec.ordering),
                    ..SweepRow::default()
                });
            }
        }
        SuiteId::Thm1 | SuiteId::Chain | SuiteId::Thm2 | SuiteId::Cor3 | SuiteId::CorGamma => {
            let uses_weight = matches!(spec.suite, SuiteId::Thm1 | SuiteId::Chain | SuiteId::Thm2);
            let domain = if spec.suite == SuiteId::Thm2 { WeightDomain::UpperHalf } else { WeightDomain::Unit };
            let weights: Vec<Option<MonotoneWeight>> = if uses_weight {
                ensure!(!spec.weights.is_empty(), "{} needs at least one weight", spec.suite);
                spec.weights
                    .iter()
                    .map(|&k| MonotoneWeight::new(k, domain).map(Some))
                    .collect::<Result<_, _>>()?
            } else {
                vec![None]
            };
            for &x in &xs {
                for g in &weights {
                    let report = check_scalar_refinement(ctx, spec.suite, 1.0, x, spec.v, g.as_ref())?;
                    let tight = report
                        .links
                        .iter()
                        .min_by(|a, b| a.margin.total_cmp(&b.margin))
                        .expect("at least one link");
                    rows.push(SweepRow {
                        x,
                        weight: g.map(|g| g.kind.to_string()).unwrap_or_default(),
                        lhs: tight.lhs.unwrap_or(f64::NAN),
                        rhs: tight.rhs.unwrap_or(f64::NAN),
                        margin: tight.margin,
                        holds: report.holds,
                        refinement_gain: report.refinement_gain,
                        ..SweepRow::default()
                    });
                }
            }
        }
        other => bail!("{other} has no scalar abscissa to sweep; use run instead"),
    }
    Ok(rows)
}

pub fn write_rows(rows: &[SweepRow], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// The crossover summary plus a pointwise check of both lower bounds on
/// the same grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossoverReport {
    #[serde(flatten)]
    pub summary: CrossoverSummary,
    pub bounds_checked: usize,
    pub bounds_hold: bool,
    /// Smallest (rhs − lhs)/rhs over both bounds and all grid points.
    pub worst_relative_margin: f64,
    pub version: &'static str,
}

pub fn crossover(ctx: &SuiteContext, lo: f64, hi: f64, grid: usize, tol: f64) -> Result<CrossoverReport> {
    let summary = crossover_summary(lo, hi, grid, tol)?;
    let xs = log_points(lo, hi, if lo == hi { 1 } else { grid })?;
    let mut holds = true;
    let mut worst = f64::INFINITY;
    for &x in &xs {
        let report = check_eq6_eq7(ctx, x)?;
        holds &= report.holds;
        for link in &report.links {
            let rhs = link.rhs.unwrap_or(0.0);
            if rhs > 0.0 {
                worst = worst.min(link.margin / rhs);
            }
        }
    }
    Ok(CrossoverReport {
        summary,
        bounds_checked: xs.len(),
        bounds_hold: holds,
        worst_relative_margin: worst,
        version: env!("CARGO_PKG_VERSION"),
    })
}
