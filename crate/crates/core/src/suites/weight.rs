use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Grid size of the monotonicity check done at construction.
pub const MONOTONE_GRID: usize = 1024;

/// Named weight functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightKind {
    /// g(t) = t
    Identity,
    /// g(t) = 2t
    Affine,
    /// g(t) = sign(t)·|t|^k, and the constant 1 for k = 0
    Power(f64),
    /// g(t) = e^t
    Exp,
}

impl WeightKind {
    /// The kinds used when the caller does not choose.
    pub const DEFAULTS: [WeightKind; 5] = [
        WeightKind::Identity,
        WeightKind::Affine,
        WeightKind::Power(2.0),
        WeightKind::Power(3.0),
        WeightKind::Exp,
    ];

    pub fn eval(self, t: f64) -> f64 {
        match self {
            WeightKind::Identity => t,
            WeightKind::Affine => 2.0 * t,
            WeightKind::Power(k) if k == 0.0 => 1.0,
            WeightKind::Power(k) => t.signum() * t.abs().powf(k),
            WeightKind::Exp => t.exp(),
        }
    }

    /// ∫_lo^hi g(t) dt in closed form.
    pub fn integral(self, lo: f64, hi: f64) -> f64 {
        match self {
            WeightKind::Identity => (hi * hi - lo * lo) / 2.0,
            WeightKind::Affine => hi * hi - lo * lo,
            WeightKind::Power(k) if k == 0.0 => hi - lo,
            WeightKind::Power(k) => (hi.abs().powf(k + 1.0) - lo.abs().powf(k + 1.0)) / (k + 1.0),
            WeightKind::Exp => hi.exp() - lo.exp(),
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::Identity => f.write_str("IDENTITY"),
            WeightKind::Affine => f.write_str("AFFINE"),
            WeightKind::Power(k) => write!(f, "POWER:{k}"),
            WeightKind::Exp => f.write_str("EXP"),
        }
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    /// Accepts `IDENTITY`, `AFFINE`, `EXP`, `POWER` (k = 2) and `POWER:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        match upper.as_str() {
            "IDENTITY" => Ok(WeightKind::Identity),
            "AFFINE" => Ok(WeightKind::Affine),
            "EXP" => Ok(WeightKind::Exp),
            "POWER" => Ok(WeightKind::Power(2.0)),
            _ => {
                let k = upper
                    .strip_prefix("POWER:")
                    .and_then(|k| k.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidParams(format!("unknown weight kind {s:?}")))?;
                if k > 0.0 && k.is_finite() {
                    Ok(WeightKind::Power(k))
                } else {
                    Err(Error::InvalidParams(format!("power weight needs k > 0, got {k}")))
                }
            }
        }
    }
}

impl Serialize for WeightKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The three intervals the refinement theorems integrate over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightDomain {
    /// [0, 1]
    Unit,
    /// [1/2, 1]
    UpperHalf,
    /// [−1, 0]
    NegUnit,
}

impl WeightDomain {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            WeightDomain::Unit => (0.0, 1.0),
            WeightDomain::UpperHalf => (0.5, 1.0),
            WeightDomain::NegUnit => (-1.0, 0.0),
        }
    }

    pub fn len(self) -> f64 {
        let (lo, hi) = self.bounds();
        hi - lo
    }

    /// `MONOTONE_GRID` equispaced points including both ends.
    pub fn grid(self) -> impl Iterator<Item = f64> {
        let (lo, hi) = self.bounds();
        let step = (hi - lo) / (MONOTONE_GRID - 1) as f64;
        (0..MONOTONE_GRID).map(move |i| if i + 1 == MONOTONE_GRID { hi } else { lo + step * i as f64 })
    }
}

impl fmt::Display for WeightDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.bounds();
        write!(f, "[{lo}, {hi}]")
    }
}

/// A non-decreasing weight g on one of the [`WeightDomain`]s, with g(hi) > g(lo).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonotoneWeight {
    pub kind: WeightKind,
    pub domain: WeightDomain,
    pub g_lo: f64,
    pub g_hi: f64,
}

impl MonotoneWeight {
    pub fn new(kind: WeightKind, domain: WeightDomain) -> Result<Self> {
        if let WeightKind::Power(k) = kind {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::InvalidParams(format!("power weight needs k > 0, got {k}")));
            }
        }
        let w = Self::degenerate(kind, domain);
        let values: Vec<f64> = domain.grid().map(|t| kind.eval(t)).collect();
        if let Some(i) = values.windows(2).position(|p| p[1] < p[0]) {
            return Err(Error::InvalidParams(format!("{kind} decreases on {domain} near grid point {i}")));
        }
        if !(w.g_hi > w.g_lo) {
            return Err(Error::InvalidParams(format!("{kind} is constant on {domain}")));
        }
        Ok(w)
    }

    /// Skips the monotonicity and non-constancy checks (used for constant functions).
    pub fn degenerate(kind: WeightKind, domain: WeightDomain) -> Self {
        let (lo, hi) = domain.bounds();
        Self {
            kind,
            domain,
            g_lo: kind.eval(lo),
            g_hi: kind.eval(hi),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.kind.eval(t)
    }

    /// g(hi) − g(lo).
    pub fn span(&self) -> f64 {
        self.g_hi - self.g_lo
    }

    /// ∫ g over the domain.
    pub fn integral(&self) -> f64 {
        let (lo, hi) = self.domain.bounds();
        self.kind.integral(lo, hi)
    }

    /// Smallest and largest value on the construction grid.
    pub fn grid_range(&self) -> (f64, f64) {
        self.domain
            .grid()
            .map(|t| self.eval(t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)))
    }
}

impl fmt::Display for MonotoneWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.kind, self.domain)
    }
}
