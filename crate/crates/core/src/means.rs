//! Scalar means and the deformed logarithm.
//!
//! Every removable singularity (the logarithmic mean at a = b, `ln_s` at
//! s = 0 and the power mean at t = 0) switches to a second-order Taylor
//! expansion once the small parameter drops below [`TAYLOR_SWITCH`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this size of the small parameter, removable singularities are
/// evaluated by series.
pub const TAYLOR_SWITCH: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MeanKind {
    Arith,
    Geom,
    Harm,
    Heron,
    Heinz,
    Power,
}

impl MeanKind {
    pub const ALL: [MeanKind; 6] = [
        MeanKind::Arith,
        MeanKind::Geom,
        MeanKind::Harm,
        MeanKind::Heron,
        MeanKind::Heinz,
        MeanKind::Power,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeanKind::Arith => "ARITH",
            MeanKind::Geom => "GEOM",
            MeanKind::Harm => "HARM",
            MeanKind::Heron => "HERON",
            MeanKind::Heinz => "HEINZ",
            MeanKind::Power => "POWER",
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeanKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown mean kind {s:?}")))
    }
}

/// The (t, v) pair shared by the Heron, Heinz and power means.
/// `t` ∈ [−1, 1] and `v` ∈ [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanParams {
    t: f64,
    v: f64,
}

impl MeanParams {
    pub fn new(t: f64, v: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&t) {
            return Err(Error::InvalidParams(format!("t = {t} is outside [-1, 1]")));
        }
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParams(format!("v = {v} is outside [0, 1]")));
        }
        Ok(Self { t, v })
    }

    /// Weight-only parameters (t = 0).
    pub fn weight(v: f64) -> Result<Self> {
        Self::new(0.0, v)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

fn require_positive(operation: &'static str, values: &[f64]) -> Result<()> {
    match values.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        Some(&value) => Err(Error::NonPositiveInput { operation, value }),
        None => Ok(()),
    }
}

/// a ∇_v b.
#[inline]
pub fn arith(a: f64, b: f64, v: f64) -> f64 {
    (1.0 - v) * a + v * b
}

/// a ♯_v b = a^{1−v} b^v, evaluated as a·exp(v ln(b/a)) so that a = b is exact.
#[inline]
pub fn geom(a: f64, b: f64, v: f64) -> f64 {
    a * (v * (b / a).ln()).exp()
}

/// a !_v b = ((1−v)/a + v/b)^{−1}.
#[inline]
pub fn harm(a: f64, b: f64, v: f64) -> f64 {
    a * b / ((1.0 - v) * b + v * a)
}

/// F_{t,v}(a, b) = (1−t)(a ♯_v b) + t(a ∇_v b).
#[inline]
pub fn heron(a: f64, b: f64, t: f64, v: f64) -> f64 {
    (1.0 - t) * geom(a, b, v) + t * arith(a, b, v)
}

/// H_t(a, b) = (a ♯_t b + b ♯_t a)/2.
#[inline]
pub fn heinz(a: f64, b: f64, t: f64) -> f64 {
    0.5 * (geom(a, b, t) + geom(b, a, t))
}

/// a m_{t,v} b = a·((1−v) + v (b/a)^t)^{1/t}; the geometric mean at t = 0.
pub fn power(a: f64, b: f64, t: f64, v: f64) -> f64 {
    let y = (b / a).ln();
    if t == 0.0 {
        return geom(a, b, v);
    }
    let log_ratio = if t.abs() < TAYLOR_SWITCH {
        power_log_series(y, t, v)
    } else {
        power_log_direct(y, t, v)
    };
    a * log_ratio.exp()
}

/// ln(m/a) = v y + t v(1−v) y²/2 + t² v(1−v)(1−2v) y³/6 + O(t³), with y = ln(b/a).
fn power_log_series(y: f64, t: f64, v: f64) -> f64 {
    let w = v * (1.0 - v);
    v * y + t * w * y * y / 2.0 + t * t * w * (1.0 - 2.0 * v) * y * y * y / 6.0
}

fn power_log_direct(y: f64, t: f64, v: f64) -> f64 {
    (v * (t * y).exp_m1()).ln_1p() / t
}

/// Dispatches on `kind`; see the individual kernels.
pub fn scalar_mean(kind: MeanKind, a: f64, b: f64, params: MeanParams) -> Result<f64> {
    require_positive("scalar_mean", &[a, b])?;
    let MeanParams { t, v } = params;
    let value = match kind {
        MeanKind::Arith => arith(a, b, v),
        MeanKind::Geom => geom(a, b, v),
        MeanKind::Harm => harm(a, b, v),
        MeanKind::Heron => {
            require_unit_t(kind, t)?;
            heron(a, b, t, v)
        }
        MeanKind::Heinz => {
            require_unit_t(kind, t)?;
            heinz(a, b, t)
        }
        MeanKind::Power => power(a, b, t, v),
    };
    Ok(value)
}

fn require_unit_t(kind: MeanKind, t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{kind} requires t in [0, 1], got {t}")))
    }
}

/// L(a, b) = (b − a)/(ln b − ln a), with L(a, a) = a.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    require_positive("log_mean", &[a, b])?;
    Ok(log_mean_unchecked(a, b))
}

pub(crate) fn log_mean_unchecked(a: f64, b: f64) -> f64 {
    let u = (b / a).ln();
    if u.abs() < TAYLOR_SWITCH {
        a * (1.0 + u / 2.0 + u * u / 6.0)
    } else {
        a * u.exp_m1() / u
    }
}

/// ln_s x = (x^s − 1)/s, with ln_0 = ln.
pub fn deformed_log(s: f64, x: f64) -> Result<f64> {
    require_positive("deformed_log", &[x])?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParams(format!("s = {s} is outside [0, 1]")));
    }
    Ok(deformed_log_unchecked(s, x))
}

pub(crate) fn deformed_log_unchecked(s: f64, x: f64) -> f64 {
    let l = x.ln();
    if s.abs() < TAYLOR_SWITCH {
        l * (1.0 + s * l / 2.0 + s * s * l * l / 6.0)
    } else {
        (s * l).exp_m1() / s
    }
}

/// γ(a, b) = ln²(b/a) / (2(ln²(b/a) + 4)).
pub fn gamma_factor(a: f64, b: f64) -> Result<f64> {
    require_positive("gamma_factor", &[a, b])?;
    Ok(gamma_unchecked(a, b))
}

pub(crate) fn gamma_unchecked(a: f64, b: f64) -> f64 {
    let l2 = (b / a).ln().powi(2);
    l2 / (2.0 * (l2 + 4.0))
}
