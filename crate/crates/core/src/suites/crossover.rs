//! Two lower bounds for (x+1)/2 − √x and where their ordering flips.
//!
//! With u = ln x:
//! - lhs6 = u²/(2(u²+4)) · (x−1)/u = u·expm1(u) / (2(u²+4))
//! - lhs7 = u²√x / 8
//! - rhs  = (x+1)/2 − √x = 2√x·sinh²(u/4)

use serde::Serialize;

use crate::error::{Error, Result};

use super::{InequalityReport, Link, SuiteContext, SuiteId};

/// Threshold beyond which the opposite ordering (lhs6 > lhs7) is claimed.
pub const CLAIMED_CROSSOVER: f64 = 11288.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Eq67Record {
    pub x: f64,
    pub lhs6: f64,
    pub lhs7: f64,
    pub rhs: f64,
    /// Sign of lhs7 − lhs6.
    pub ordering: i8,
}

pub fn compare_eq6_eq7(x: f64) -> Result<Eq67Record> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::NonPositiveInput {
            operation: "compare_eq6_eq7",
            value: x,
        });
    }
    let u = x.ln();
    let lhs6 = u * u.exp_m1() / (2.0 * (u * u + 4.0));
    let lhs7 = u * u * x.sqrt() / 8.0;
    let rhs = 2.0 * x.sqrt() * (u / 4.0).sinh().powi(2);
    let d = lhs7 - lhs6;
    let ordering = if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    };
    Ok(Eq67Record {
        x,
        lhs6,
        lhs7,
        rhs,
        ordering,
    })
}

/// d(x) = lhs7(x) − lhs6(x).
pub fn eq6_eq7_gap(x: f64) -> Result<f64> {
    let r = compare_eq6_eq7(x)?;
    Ok(r.lhs7 - r.lhs6)
}

/// Both bounds individually, with relative slack `scalar_rel·|rhs|`.
pub fn check_eq6_eq7(ctx: &SuiteContext, x: f64) -> Result<InequalityReport> {
    let r = compare_eq6_eq7(x)?;
    let tol = ctx.scalar_rel * r.rhs.abs();
    Ok(InequalityReport::new(SuiteId::Eq6Eq7)
        .input("x", x)
        .link(Link::scalar("lhs6 <= rhs", r.lhs6, r.rhs, tol))
        .link(Link::scalar("lhs7 <= rhs", r.lhs7, r.rhs, tol))
        .note("lhs6", r.lhs6)
        .note("lhs7", r.lhs7)
        .note("ordering", f64::from(r.ordering)))
}

fn log_grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    let step = (l1 - l0) / (points - 1) as f64;
    (0..points).map(move |i| match i {
        0 => lo,
        _ if i + 1 == points => hi,
        _ => (l0 + step * i as f64).exp(),
    })
}

fn validate_range(lo: f64, hi: f64, grid_points: usize) -> Result<()> {
    if !(lo > 0.0 && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParams(format!("range [{lo}, {hi}] must be positive and finite")));
    }
    if grid_points < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 grid points, got {grid_points}")));
    }
    Ok(())
}

/// Sign changes of lhs7 − lhs6 on a log-spaced grid over [lo, hi], each
/// refined by geometric bisection until the bracket's relative width is
/// below `bisect_tol`. Empty when lo ≥ hi.
pub fn find_ordering_crossovers(lo: f64, hi: f64, grid_points: usize, bisect_tol: f64) -> Result<Vec<f64>> {
    validate_range(lo, hi, grid_points)?;
    if !(bisect_tol > 0.0) {
        return Err(Error::InvalidParams(format!("bisection tolerance {bisect_tol} must be positive")));
    }
    if lo >= hi {
        return Ok(Vec::new());
    }
    let mut samples = Vec::with_capacity(grid_points);
    for x in log_grid(lo, hi, grid_points) {
        let d = eq6_eq7_gap(x)?;
        if d != 0.0 {
            samples.push((x, d > 0.0));
        }
    }
    let mut crossings = Vec::new();
    for pair in samples.windows(2) {
        let ((mut a, sign_a), (mut b, sign_b)) = (pair[0], pair[1]);
        if sign_a == sign_b {
            continue;
        }
        while (b - a) > bisect_tol * a {
            let mid = (a * b).sqrt();
            let d = eq6_eq7_gap(mid)?;
            if d == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if (d > 0.0) == sign_a {
                a = mid;
            } else {
                b = mid;
            }
        }
        crossings.push((a * b).sqrt());
    }
    Ok(crossings)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Undetermined,
}

/// Measured crossovers next to the claimed threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossoverSummary {
    pub lo: f64,
    pub hi: f64,
    pub grid_points: usize,
    pub bisect_tol: f64,
    pub crossovers: Vec<f64>,
    pub claimed_threshold: f64,
    /// lhs7 − lhs6 at the claimed threshold.
    pub gap_at_claim: f64,
    /// Fraction of grid points above the claim where lhs6 > lhs7.
    pub agreement_above_claim: Option<f64>,
    pub verdict: Verdict,
}

/// The claim is CONSISTENT when some crossover was found and lhs6 > lhs7 at
/// every grid point above the threshold, INCONSISTENT when a crossover was
/// found but some grid point above the threshold has lhs6 ≤ lhs7, and
/// UNDETERMINED when no crossover was found or the range ends below it.
pub fn crossover_summary(lo: f64, hi: f64, grid_points: usize, bisect_tol: f64) -> Result<CrossoverSummary> {
    let crossovers = find_ordering_crossovers(lo, hi, grid_points, bisect_tol)?;
    let above: Vec<f64> = if lo < hi {
        log_grid(lo, hi, grid_points).filter(|&x| x > CLAIMED_CROSSOVER).collect()
    } else {
        Vec::new()
    };
    let mut agreeing = 0usize;
    for &x in &above {
        if eq6_eq7_gap(x)? < 0.0 {
            agreeing += 1;
        }
    }
    let agreement_above_claim = (!above.is_empty()).then(|| agreeing as f64 / above.len() as f64);
    let verdict = if crossovers.is_empty() || hi <= CLAIMED_CROSSOVER || above.is_empty() {
        Verdict::Undetermined
    } else if agreeing == above.len() {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    Ok(CrossoverSummary {
        lo,
        hi,
        grid_points,
        bisect_tol,
        crossovers,
        claimed_threshold: CLAIMED_CROSSOVER,
        gap_at_claim: eq6_eq7_gap(CLAIMED_CROSSOVER)?,
        agreement_above_claim,
        verdict,
    })
}
