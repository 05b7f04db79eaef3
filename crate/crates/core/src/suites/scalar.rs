use crate::error::{Error, Result};
use crate::means::{self, arith, geom, heinz, heron, MeanParams};
use crate::quadrature::integrate_scalar;

use super::operator::{plan, side_scalar};
use super::{InequalityReport, Link, MonotoneWeight, SuiteContext, SuiteId, WeightDomain};

/// Below this distance from x = 1, [`cor3_correction`] switches to its series.
const COR3_SERIES_SWITCH: f64 = 1e-6;

fn require_positive(operation: &'static str, values: &[f64]) -> Result<()> {
    match values.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        Some(&value) => Err(Error::NonPositiveInput { operation, value }),
        None => Ok(()),
    }
}

fn require_weight(suite: SuiteId, g: Option<&MonotoneWeight>, domain: WeightDomain) -> Result<&MonotoneWeight> {
    match g {
        Some(g) if g.domain == domain => Ok(g),
        Some(g) => Err(Error::InvalidParams(format!("{suite} needs a weight on {domain}, got {}", g.domain))),
        None => Err(Error::InvalidParams(format!("{suite} needs a weight on {domain}"))),
    }
}

/// Čebyšev and Grüss inequalities for two weights on a common interval.
pub fn check_gruss_base(
    ctx: &SuiteContext,
    f: &MonotoneWeight,
    g: &MonotoneWeight,
    (m, big_m, n, big_n): (f64, f64, f64, f64),
) -> Result<InequalityReport> {
    if f.domain != g.domain {
        return Err(Error::InvalidParams(format!("weights live on {} and {}", f.domain, g.domain)));
    }
    for (w, lo, hi) in [(f, m, big_m), (g, n, big_n)] {
        let (min, max) = w.grid_range();
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if min < lo - slack || max > hi + slack {
            return Err(Error::BoundsViolated(format!("{w} ranges over [{min}, {max}], outside [{lo}, {hi}]")));
        }
    }
    let (lo, hi) = f.domain.bounds();
    let len = hi - lo;
    let quad = ctx.integrator();
    let mf = integrate_scalar(quad, lo, hi, |t| f.eval(t))?;
    let mg = integrate_scalar(quad, lo, hi, |t| g.eval(t))?;
    let mfg = integrate_scalar(quad, lo, hi, |t| f.eval(t) * g.eval(t))?;
    let (mf_v, mg_v, mfg_v) = (mf.value / len, mg.value / len, mfg.value / len);
    let err = (mfg.error + mf.error * mg_v.abs() + mg.error * mf_v.abs()) / len;

    let product = mf_v * mg_v;
    let functional = mfg_v - product;
    let bound = (big_m - m) * (big_n - n) / 4.0;
    Ok(InequalityReport::new(SuiteId::GrussBase)
        .input("f", f)
        .input("g", g)
        .input("bounds", format!("[{m}, {big_m}] x [{n}, {big_n}]"))
        .link(Link::scalar("product of means <= mean of product", product, mfg_v, ctx.scalar_tol(mfg_v, err)))
        .link(Link::scalar("functional <= grid bound", functional, bound, ctx.scalar_tol(bound, err)))
        .gain(functional)
        .quadrature_error(err))
}

/// 4/ln²x · ((x−1) ln x / 8 + √x − (x+1)/2), continued by its series at x = 1.
pub fn cor3_correction(x: f64) -> f64 {
    let u = x.ln();
    if (x - 1.0).abs() < COR3_SERIES_SWITCH {
        return u * u / 96.0 + u * u * u / 192.0;
    }
    let half = (u / 2.0).exp_m1();
    let inner = u * u.exp_m1() / 8.0 - half * half / 2.0;
    4.0 * inner / (u * u)
}

/// Scalar refinements of the weighted AM-GM inequality.
///
/// `v` is used by THM1 only; COR3 and COR_GAMMA ignore `g`.
pub fn check_scalar_refinement(
    ctx: &SuiteContext,
    suite: SuiteId,
    a: f64,
    b: f64,
    v: f64,
    g: Option<&MonotoneWeight>,
) -> Result<InequalityReport> {
    require_positive("scalar refinement", &[a, b])?;
    let quad = ctx.integrator();
    let report = InequalityReport::new(suite).input("a", a).input("b", b);
    match suite {
        SuiteId::Thm1 => {
            MeanParams::weight(v)?;
            let g = require_weight(suite, g, WeightDomain::Unit)?;
            let mid = heron(a, b, 0.5, v);
            let q = integrate_scalar(quad, 0.0, 1.0, |t| (heron(a, b, t, v) - mid) * g.eval(t))?;
            let factor = 4.0 / g.span();
            let (term, err) = (factor * q.value, factor * q.error);
            let (lower, upper) = (geom(a, b, v), arith(a, b, v));
            let tol = ctx.scalar_tol(upper, err);
            Ok(report
                .input("v", v)
                .input("g", g)
                .link(Link::scalar("refined geometric <= arithmetic", lower + term, upper, tol))
                .link(Link::scalar("refinement term >= 0", 0.0, term, tol))
                .gain(term)
                .quadrature_error(err))
        }
        SuiteId::Chain => {
            let g = require_weight(suite, g, WeightDomain::Unit)?;
            let mass = g.integral();
            if !(mass > 0.0) {
                return Err(Error::InvalidParams(format!("{g} has non-positive integral {mass}")));
            }
            let q = integrate_scalar(quad, 0.0, 1.0, |t| g.eval(t) * heron(a, b, t, 0.5))?;
            let (average, err) = (q.value / mass, q.error / mass);
            let (gm, mid, am) = (geom(a, b, 0.5), heron(a, b, 0.5, 0.5), arith(a, b, 0.5));
            Ok(report
                .input("g", g)
                .link(Link::scalar("geometric <= midpoint Heron", gm, mid, ctx.scalar_tol(mid, 0.0)))
                .link(Link::scalar("midpoint Heron <= weighted average", mid, average, ctx.scalar_tol(average, err)))
                .link(Link::scalar("weighted average <= arithmetic", average, am, ctx.scalar_tol(am, err)))
                .gain(average - mid)
                .quadrature_error(err))
        }
        SuiteId::Thm2 => {
            let g = require_weight(suite, g, WeightDomain::UpperHalf)?;
            let l = means::log_mean_unchecked(a, b);
            let q = integrate_scalar(quad, 0.5, 1.0, |t| g.eval(t) * (heinz(a, b, t) - l))?;
            let factor = 2.0 / g.span();
            let (term, err) = (factor * q.value, factor * q.error);
            let (lower, upper) = (geom(a, b, 0.5), arith(a, b, 0.5));
            let tol = ctx.scalar_tol(upper, err);
            Ok(report
                .input("g", g)
                .link(Link::scalar("refined geometric <= arithmetic", lower + term, upper, tol))
                .link(Link::scalar("refinement term >= 0", 0.0, term, tol))
                .gain(term)
                .quadrature_error(err))
        }
        SuiteId::Cor3 => {
            let x = b / a;
            let term = cor3_correction(x);
            let upper = (1.0 + x) / 2.0;
            let tol = ctx.scalar_tol(upper, 0.0);
            Ok(report
                .input("x", x)
                .link(Link::scalar("refined sqrt(x) <= (1+x)/2", x.sqrt() + term, upper, tol))
                .link(Link::scalar("refinement term >= 0", 0.0, term, tol))
                .gain(term))
        }
        SuiteId::CorGamma => {
            let term = means::gamma_unchecked(a, b) * means::log_mean_unchecked(a, b);
            let upper = arith(a, b, 0.5);
            let tol = ctx.scalar_tol(upper, 0.0);
            Ok(report
                .link(Link::scalar("geometric + gamma*L <= arithmetic", geom(a, b, 0.5) + term, upper, tol))
                .gain(term))
        }
        other => Err(Error::InvalidParams(format!("{other} is not a scalar refinement suite"))),
    }
}

/// The scalar inequality behind an operator suite, evaluated at the
/// eigenvalue pair (a, b) of a commuting pair. Its margin equals the
/// corresponding diagonal entry of RHS − LHS in the operator check.
pub fn check_scalar_counterpart(
    ctx: &SuiteContext,
    suite: SuiteId,
    a: f64,
    b: f64,
    params: MeanParams,
    g: Option<&MonotoneWeight>,
    s: f64,
) -> Result<InequalityReport> {
    require_positive("scalar counterpart", &[a, b])?;
    let plan = plan(suite, params, g, s)?;
    let x = b / a;
    let q = integrate_scalar(ctx.integrator(), plan.lo, plan.hi, |t| (plan.kernel)(t, x))?;
    let term = a * plan.factor * q.value;
    let err = a * plan.factor.abs() * q.error;
    let lower = side_scalar(plan.lower, a, b)?;
    let upper = side_scalar(plan.upper, a, b)?;
    let tol = ctx.scalar_tol(upper, err);
    Ok(InequalityReport::new(suite)
        .input("a", a)
        .input("b", b)
        .input("v", params.v())
        .link(Link::scalar("refined lower <= upper", lower + term, upper, tol))
        .link(Link::scalar("refinement term >= 0", 0.0, term, tol))
        .gain(term)
        .quadrature_error(err))
}
