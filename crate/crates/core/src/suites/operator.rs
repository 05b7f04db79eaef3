//! Operator refinements. Every integrand is A^{1/2} k(t, C) A^{1/2} for a
//! scalar kernel k(t, x) of the relative spectrum, so the same kernel also
//! drives the scalar counterpart used by the commuting-pair oracle.

use crate::error::{Error, Result};
use crate::linalg::{eigh, loewner_leq_with_tol, HermitianMatrix};
use crate::means::{self, MeanKind, MeanParams};
use crate::opmeans::{entropy_kernel, op_mean, product_form_residual, relative_entropy, PositivePair};
use crate::quadrature::Integrand;

use super::{InequalityReport, Link, MonotoneWeight, SuiteContext, SuiteId, WeightDomain, WeightKind};

/// One side of an operator inequality.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Side {
    Mean(MeanKind, f64),
    Entropy(f64),
}

pub(crate) type Kernel = Box<dyn Fn(f64, f64) -> f64>;

/// lower + factor·∫_lo^hi k(t, ·) dt ⪯ upper.
pub(crate) struct Plan {
    pub lo: f64,
    pub hi: f64,
    pub factor: f64,
    pub lower: Side,
    pub upper: Side,
    pub kernel: Kernel,
    /// Kernel value at t = lo where the formula is a removable singularity.
    pub lo_value: Option<fn(f64) -> f64>,
}

fn weight_on(suite: SuiteId, g: Option<&MonotoneWeight>, domain: WeightDomain) -> Result<MonotoneWeight> {
    match g {
        Some(g) if g.domain == domain => Ok(*g),
        Some(g) => Err(Error::InvalidParams(format!("{suite} needs a weight on {domain}, got {}", g.domain))),
        None => Err(Error::InvalidParams(format!("{suite} needs a weight on {domain}"))),
    }
}

pub(crate) fn plan(suite: SuiteId, params: MeanParams, g: Option<&MonotoneWeight>, s: f64) -> Result<Plan> {
    let v = params.v();
    match suite {
        SuiteId::OpHeron => {
            let g = weight_on(suite, g, WeightDomain::Unit)?;
            Ok(Plan {
                lo: 0.0,
                hi: 1.0,
                factor: 4.0 / g.span(),
                lower: Side::Mean(MeanKind::Geom, v),
                upper: Side::Mean(MeanKind::Arith, v),
                kernel: Box::new(move |t, x| (means::heron(1.0, x, t, v) - means::heron(1.0, x, 0.5, v)) * g.eval(t)),
                lo_value: None,
            })
        }
        SuiteId::OpHeinzLog => {
            let g = weight_on(suite, g, WeightDomain::UpperHalf)?;
            Ok(Plan {
                lo: 0.5,
                hi: 1.0,
                factor: 2.0 / g.span(),
                lower: Side::Mean(MeanKind::Geom, 0.5),
                upper: Side::Mean(MeanKind::Arith, 0.5),
                kernel: Box::new(move |t, x| g.eval(t) * (means::heinz(1.0, x, t) - means::log_mean_unchecked(1.0, x))),
                lo_value: None,
            })
        }
        SuiteId::OpPowerAg | SuiteId::OpPowerHg => {
            let (domain, lower, upper) = if suite == SuiteId::OpPowerAg {
                (WeightDomain::Unit, MeanKind::Geom, MeanKind::Arith)
            } else {
                (WeightDomain::NegUnit, MeanKind::Harm, MeanKind::Geom)
            };
            let g = weight_on(suite, g, domain)?;
            let (lo, hi) = domain.bounds();
            let mean_g = g.integral() / domain.len();
            Ok(Plan {
                lo,
                hi,
                factor: 4.0 / g.span(),
                lower: Side::Mean(lower, v),
                upper: Side::Mean(upper, v),
                kernel: Box::new(move |t, x| means::power(1.0, x, t, v) * (g.eval(t) - mean_g)),
                lo_value: None,
            })
        }
        SuiteId::OpEntropy => {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::InvalidParams(format!("entropy order s = {s} is outside (0, 1]")));
            }
            Ok(Plan {
                lo: 0.0,
                hi: 1.0,
                factor: 2.0,
                lower: Side::Entropy(0.0),
                upper: Side::Entropy(s),
                kernel: Box::new(move |t, x| (2.0 * t - 1.0) * entropy_kernel(s * t, x)),
                lo_value: Some(|x| -x.ln()),
            })
        }
        other => Err(Error::InvalidParams(format!("{other} is not an operator refinement suite"))),
    }
}

fn side_op(side: Side, pair: &PositivePair) -> Result<HermitianMatrix> {
    match side {
        Side::Mean(kind, v) => op_mean(kind, pair, MeanParams::weight(v)?),
        Side::Entropy(p) => relative_entropy(pair, p),
    }
}

pub(crate) fn side_scalar(side: Side, a: f64, b: f64) -> Result<f64> {
    match side {
        Side::Mean(kind, v) => means::scalar_mean(kind, a, b, MeanParams::weight(v)?),
        Side::Entropy(p) => Ok(a * entropy_kernel(p, b / a)),
    }
}

/// Operator refinements of the AM-GM, GM-HM and entropy inequalities.
///
/// Only `params.v()` is used. OP_ENTROPY ignores `g` (its weight is 2t)
/// and reads `s`; the other suites ignore `s`.
pub fn check_operator_refinement(
    ctx: &SuiteContext,
    suite: SuiteId,
    pair: &PositivePair,
    params: MeanParams,
    g: Option<&MonotoneWeight>,
    s: f64,
) -> Result<InequalityReport> {
    let plan = plan(suite, params, g, s)?;
    let lower = side_op(plan.lower, pair)?;
    let upper = side_op(plan.upper, pair)?;

    let kernel = &plan.kernel;
    let mut integrand = Integrand::new(|t| Ok(pair.congruence(|x| kernel(t, x))));
    if let Some(at_lo) = plan.lo_value {
        integrand = integrand.with_lo_value(pair.congruence(at_lo));
    }
    let q = ctx.integrator().integrate(&integrand, plan.lo, plan.hi)?;
    let term = q.value.scale(plan.factor);
    let err = plan.factor.abs() * q.error;

    let refined = lower.add(&term);
    let tol = ctx.psd_tol(&refined, &upper, err)?;
    let main = loewner_leq_with_tol(&refined, &upper, tol)?;
    let gain = eigh(&term)?.min_eigenvalue();

    let mut report = InequalityReport::new(suite).input("dim", pair.dim()).input("v", params.v());
    report = match suite {
        SuiteId::OpEntropy => report.input("s", s).input("g", WeightKind::Affine),
        _ => report.input("g", g.map(|g| g.to_string()).unwrap_or_default()),
    };
    report = report
        .loewner("refined lower <= upper", main)
        .link(Link::scalar("refinement term >= 0", 0.0, gain, tol))
        .gain(gain)
        .quadrature_error(err);
    if suite == SuiteId::OpHeinzLog {
        if let Some(residual) = product_form_residual(pair) {
            report = report.note("product_log_term_residual", residual);
        }
    }
    Ok(report)
}
