//! One case is one checker call. Its digest names everything needed to
//! rebuild the inputs: suite, run seed, trial index, dimension and the
//! weight/order parameters.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use gruss_core::covariance::{
    check_gruss_operator, check_kittaneh_refinement, check_thm13, check_thm51, check_x3_and_rem11, lemma_y1,
};
use gruss_core::random::{gen_complex, gen_pd, gen_unit_vector, trial_seed};
use gruss_core::suites::{check_eq6_eq7, check_gruss_base, check_operator_refinement, check_scalar_refinement};
use gruss_core::{
    ComplexMatrix, HermitianMatrix, InequalityReport, InstanceConfig, MeanParams, MonotoneWeight, PositivePair,
    SpectrumBounds, SplitMix64, SuiteContext, SuiteId, UnitVector, WeightDomain, WeightKind,
};

use crate::config::{RunConfig, KITTANEH_SAMPLES, S_GRID, V_GRID};

const TAG_A: u64 = 11;
const TAG_B: u64 = 12;
const TAG_X: u64 = 13;
const TAG_T: u64 = 14;
const TAG_SCALAR: u64 = 15;
const TAG_SLACK: u64 = 16;
const TAG_SAMPLES: u64 = 100;

const EQ67_RANGE: (f64, f64) = (1.0001, 1e7);

#[derive(Clone, Debug, PartialEq)]
pub struct Digest {
    pub suite: SuiteId,
    pub seed: u64,
    pub trial: u64,
    pub dim: usize,
    pub weight: Option<WeightKind>,
    /// Second weight (f) of GRUSS_BASE.
    pub first: Option<WeightKind>,
    pub v: Option<f64>,
    pub s: Option<f64>,
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/s{}/t{}/d{}", self.suite, self.seed, self.trial, self.dim)?;
        if let Some(w) = self.first {
            write!(f, "/f={w}")?;
        }
        if let Some(w) = self.weight {
            write!(f, "/w={w}")?;
        }
        if let Some(v) = self.v {
            write!(f, "/v={v}")?;
        }
        if let Some(s) = self.s {
            write!(f, "/s={s}")?;
        }
        Ok(())
    }
}

impl FromStr for Digest {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut parts = text.trim().split('/');
        let suite: SuiteId = parts
            .next()
            .filter(|p| !p.is_empty())
            .ok_or_else(|| anyhow!("empty digest"))?
            .parse()
            .map_err(|e| anyhow!("{e}"))?;
        let mut d = Digest {
            suite,
            seed: 0,
            trial: 0,
            dim: 0,
            weight: None,
            first: None,
            v: None,
            s: None,
        };
        let (mut seen_seed, mut seen_trial, mut seen_dim) = (false, false, false);
        for part in parts {
            let bad = || anyhow!("malformed digest field {part:?} in {text:?}");
            if let Some((key, value)) = part.split_once('=') {
                match key {
                    "w" => d.weight = Some(value.parse().map_err(|_| bad())?),
                    "f" => d.first = Some(value.parse().map_err(|_| bad())?),
                    "v" => d.v = Some(value.parse().map_err(|_| bad())?),
                    "s" => d.s = Some(value.parse().map_err(|_| bad())?),
                    _ => return Err(bad()),
                }
                continue;
            }
            let (key, value) = part.split_at(part.chars().next().map_or(0, char::len_utf8));
            match key {
                "s" => (d.seed, seen_seed) = (value.parse().map_err(|_| bad())?, true),
                "t" => (d.trial, seen_trial) = (value.parse().map_err(|_| bad())?, true),
                "d" => (d.dim, seen_dim) = (value.parse().map_err(|_| bad())?, true),
                _ => return Err(bad()),
            }
        }
        if !(seen_seed && seen_trial && seen_dim) {
            bail!("digest {text:?} must carry s<seed>, t<trial> and d<dim>");
        }
        Ok(d)
    }
}

/// User-supplied matrices replacing the generated A (or T) and B.
#[derive(Clone, Debug, Default)]
pub struct FixedInput {
    pub a: Option<ComplexMatrix>,
    pub b: Option<ComplexMatrix>,
}

impl FixedInput {
    pub fn is_empty(&self) -> bool {
        self.a.is_none() && self.b.is_none()
    }

    /// Dimension of the supplied matrices, if any.
    pub fn dim(&self) -> Result<Option<usize>> {
        match (&self.a, &self.b) {
            (Some(a), Some(b)) if a.dim() != b.dim() => bail!("A is {0}x{0} but B is {1}x{1}", a.dim(), b.dim()),
            (Some(m), _) | (_, Some(m)) => Ok(Some(m.dim())),
            (None, None) => Ok(None),
        }
    }
}

fn domain_for(suite: SuiteId) -> WeightDomain {
    match suite {
        SuiteId::Thm2 | SuiteId::OpHeinzLog => WeightDomain::UpperHalf,
        SuiteId::OpPowerHg => WeightDomain::NegUnit,
        _ => WeightDomain::Unit,
    }
}

/// Every case of `suite` in trial `trial`, in a fixed order.
pub fn enumerate(cfg: &RunConfig, suite: SuiteId, trial: u64) -> Vec<Digest> {
    let base = Digest {
        suite,
        seed: cfg.seed,
        trial,
        dim: cfg.dim,
        weight: None,
        first: None,
        v: None,
        s: None,
    };
    let with_w = |w: WeightKind| Digest {
        weight: Some(w),
        ..base.clone()
    };
    let with_wv = |w: WeightKind, v: f64| Digest {
        v: Some(v),
        ..with_w(w)
    };
    match suite {
        SuiteId::Thm1 | SuiteId::OpHeron | SuiteId::OpPowerAg | SuiteId::OpPowerHg => cfg
            .weights
            .iter()
            .flat_map(|&w| V_GRID.iter().map(move |&v| (w, v)))
            .map(|(w, v)| with_wv(w, v))
            .collect(),
        SuiteId::Chain | SuiteId::Thm2 | SuiteId::OpHeinzLog => cfg.weights.iter().map(|&w| with_w(w)).collect(),
        SuiteId::GrussBase => cfg
            .weights
            .iter()
            .flat_map(|&f| cfg.weights.iter().map(move |&g| (f, g)))
            .map(|(f, g)| Digest {
                first: Some(f),
                ..with_w(g)
            })
            .collect(),
        SuiteId::OpEntropy => S_GRID
            .iter()
            .map(|&s| Digest {
                s: Some(s),
                ..base.clone()
            })
            .collect(),
        _ => vec![base],
    }
}

fn sub_seed(ts: u64, tag: u64) -> u64 {
    SplitMix64::stream(ts, tag).next_u64()
}

fn log_uniform(rng: &mut SplitMix64, (lo, hi): (f64, f64)) -> f64 {
    rng.uniform_in(lo.ln(), hi.ln()).exp()
}

/// Inputs of one case, rebuilt from its digest.
struct Instance<'a> {
    cfg: &'a RunConfig,
    digest: &'a Digest,
    fixed: &'a FixedInput,
    ts: u64,
}

impl Instance<'_> {
    fn pd(&self, tag: u64) -> Result<(HermitianMatrix, Vec<f64>)> {
        let icfg = InstanceConfig {
            dim: self.digest.dim,
            seed: sub_seed(self.ts, tag),
            spectrum_lo: self.cfg.spectrum.0,
            spectrum_hi: self.cfg.spectrum.1,
            include_endpoints: false,
        };
        let fixed = if tag == TAG_A { &self.fixed.a } else { &self.fixed.b };
        match fixed {
            Some(m) => {
                let h = HermitianMatrix::new(m.clone()).context("supplied matrix is not Hermitian")?;
                let values = gruss_core::eigh(&h)?.eigenvalues().to_vec();
                Ok((h, values))
            }
            None => Ok(gen_pd(&icfg)?),
        }
    }

    fn general(&self) -> Result<ComplexMatrix> {
        match &self.fixed.a {
            Some(m) => Ok(m.clone()),
            None => Ok(gen_complex(self.digest.dim, sub_seed(self.ts, TAG_T), 1.0)?),
        }
    }

    fn vector(&self, tag: u64) -> Result<UnitVector> {
        Ok(gen_unit_vector(self.digest.dim, sub_seed(self.ts, tag))?)
    }

    fn scalar_rng(&self) -> SplitMix64 {
        SplitMix64::stream(self.ts, TAG_SCALAR)
    }

    fn pair(&self) -> Result<PositivePair> {
        Ok(PositivePair::new(self.pd(TAG_A)?.0, self.pd(TAG_B)?.0)?)
    }

    fn bounded_pair(&self) -> Result<(HermitianMatrix, HermitianMatrix, SpectrumBounds)> {
        let (a, la) = self.pd(TAG_A)?;
        let (b, lb) = self.pd(TAG_B)?;
        let ext = |v: &[f64]| (v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        let ((m, big_m), (n, big_n)) = (ext(&la), ext(&lb));
        Ok((a, b, SpectrumBounds::new(m, big_m, n, big_n)?))
    }
}

fn weight(d: &Digest, kind: Option<WeightKind>) -> Result<MonotoneWeight> {
    let kind = kind.ok_or_else(|| anyhow!("{} needs a weight (w=...)", d.suite))?;
    Ok(MonotoneWeight::new(kind, domain_for(d.suite))?)
}

fn v_of(d: &Digest) -> Result<f64> {
    d.v.ok_or_else(|| anyhow!("{} needs a weight parameter (v=...)", d.suite))
}

/// Rebuilds the inputs named by `d` and runs its checker.
pub fn execute(cfg: &RunConfig, ctx: &SuiteContext, fixed: &FixedInput, d: &Digest) -> Result<InequalityReport> {
    let inst = Instance {
        cfg,
        digest: d,
        fixed,
        ts: trial_seed(d.seed, d.trial),
    };
    let report = match d.suite {
        SuiteId::Thm1 | SuiteId::Chain | SuiteId::Thm2 | SuiteId::Cor3 | SuiteId::CorGamma => {
            let mut rng = inst.scalar_rng();
            let a = log_uniform(&mut rng, cfg.scalar_range);
            let b = log_uniform(&mut rng, cfg.scalar_range);
            let g = match d.suite {
                SuiteId::Thm1 | SuiteId::Chain | SuiteId::Thm2 => Some(weight(d, d.weight)?),
                _ => None,
            };
            let v = if d.suite == SuiteId::Thm1 { v_of(d)? } else { 0.5 };
            check_scalar_refinement(ctx, d.suite, a, b, v, g.as_ref())?
        }
        SuiteId::GrussBase => {
            let f = weight(d, d.first)?;
            let g = weight(d, d.weight)?;
            let mut rng = SplitMix64::stream(inst.ts, TAG_SLACK);
            let (f_lo, f_hi) = f.grid_range();
            let (g_lo, g_hi) = g.grid_range();
            let mut widen = |lo: f64, hi: f64| {
                let w = hi - lo;
                (lo - w * rng.uniform(), hi + w * rng.uniform())
            };
            let (m, big_m) = widen(f_lo, f_hi);
            let (n, big_n) = widen(g_lo, g_hi);
            check_gruss_base(ctx, &f, &g, (m, big_m, n, big_n))?
        }
        SuiteId::OpHeron | SuiteId::OpHeinzLog | SuiteId::OpPowerAg | SuiteId::OpPowerHg | SuiteId::OpEntropy => {
            let pair = inst.pair()?;
            let params = MeanParams::weight(d.v.unwrap_or(0.5))?;
            let (g, s) = if d.suite == SuiteId::OpEntropy {
                (None, d.s.ok_or_else(|| anyhow!("OP_ENTROPY needs an order (s=...)"))?)
            } else {
                (Some(weight(d, d.weight)?), 0.0)
            };
            check_operator_refinement(ctx, d.suite, &pair, params, g.as_ref(), s)?
        }
        SuiteId::Eq6Eq7 => {
            let x = log_uniform(&mut inst.scalar_rng(), EQ67_RANGE);
            check_eq6_eq7(ctx, x)?
        }
        SuiteId::LemmaY1 => {
            let mut rng = inst.scalar_rng();
            let mut draw = || log_uniform(&mut rng, cfg.scalar_range);
            let (a, b, c, dd) = (draw(), draw(), draw(), draw());
            lemma_y1(a, b, c, dd)?
        }
        SuiteId::Thm51 => check_thm51(&inst.general()?, &inst.vector(TAG_X)?)?,
        SuiteId::Kittaneh => {
            let t = inst.general()?;
            let samples = (0..KITTANEH_SAMPLES as u64)
                .map(|k| inst.vector(TAG_SAMPLES + k))
                .collect::<Result<Vec<_>>>()?;
            check_kittaneh_refinement(&t, &samples)?
        }
        SuiteId::X3Rem11 => {
            let (a, b) = (inst.pd(TAG_A)?.0, inst.pd(TAG_B)?.0);
            check_x3_and_rem11(&a, &b, &inst.vector(TAG_X)?)?
        }
        SuiteId::Thm13 | SuiteId::GrussOp => {
            let (a, b, bounds) = inst.bounded_pair()?;
            let x = inst.vector(TAG_X)?;
            if d.suite == SuiteId::Thm13 {
                check_thm13(&a, &b, &bounds, &x, ctx.psd_rel)?
            } else {
                check_gruss_operator(&a, &b, &bounds, &x, ctx.psd_rel)?
            }
        }
    };
    Ok(report)
}
