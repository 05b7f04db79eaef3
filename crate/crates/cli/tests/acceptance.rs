//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the test log.
//! The process fails when a criterion fails that is not listed in
//! `KNOWN_FAILURES`, or when a listed criterion fails for any reason other
//! than the recorded one.

use std::process::{Command, ExitCode, Stdio};
use std::time::Instant;

use gruss_cli::cases::FixedInput;
use gruss_cli::config::RunConfig;
use gruss_cli::run_suites;
use gruss_cli::sweep::crossover;
use gruss_core::covariance::{
    check_gruss_operator, check_kittaneh_with, check_thm13, check_thm51, check_x3_and_rem11, lemma_y1,
    numerical_radius, DEFAULT_REFINE_TOL, DEFAULT_THETA_GRID,
};
use gruss_core::linalg::operator_norm;
use gruss_core::means::{arith, geom};
use gruss_core::random::{gen_commuting_pair, gen_complex, gen_pd, gen_unit_vector, gen_unitary};
use gruss_core::suites::{check_operator_refinement, check_scalar_counterpart, check_scalar_refinement};
use gruss_core::{
    ComplexMatrix, HermitianMatrix, InstanceConfig, MeanParams, MonotoneWeight, SpectrumBounds, SplitMix64,
    SuiteContext, SuiteId, WeightDomain, WeightKind,
};
use num_complex::Complex64;

const SEED: u64 = 20_240_601;
const V_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const OP_DIMS: [usize; 4] = [2, 3, 4, 8];
const OP_SUITES: [SuiteId; 5] = [
    SuiteId::OpHeron,
    SuiteId::OpHeinzLog,
    SuiteId::OpPowerAg,
    SuiteId::OpPowerHg,
    SuiteId::OpEntropy,
];

/// Criteria that fail for a reason recorded here. Criterion 5 fails only
/// through THM13: its refined bound drops below the covariance (and even
/// below zero) on instances with wide spectra.
const KNOWN_FAILURES: [u32; 1] = [5];

struct Outcome {
    pass: bool,
    /// A failure that is not the recorded one.
    unexpected: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            unexpected: false,
            detail,
        }
    }
}

fn log_uniform(rng: &mut SplitMix64, lo: f64, hi: f64) -> f64 {
    rng.uniform_in(lo.ln(), hi.ln()).exp()
}

fn weight(kind: WeightKind, domain: WeightDomain) -> MonotoneWeight {
    MonotoneWeight::new(kind, domain).expect("default weights are monotone")
}

fn pd(seed: u64, dim: usize) -> (HermitianMatrix, Vec<f64>) {
    gen_pd(&InstanceConfig {
        dim,
        seed,
        ..InstanceConfig::default()
    })
    .expect("valid instance config")
}

fn c1_scalar_sweep() -> Outcome {
    let ctx = SuiteContext::default();
    let mut rng = SplitMix64::stream(SEED, 1);
    let unit: Vec<_> = WeightKind::DEFAULTS.iter().map(|&k| weight(k, WeightDomain::Unit)).collect();
    let half: Vec<_> = WeightKind::DEFAULTS.iter().map(|&k| weight(k, WeightDomain::UpperHalf)).collect();
    let (mut checks, mut failures, mut errors) = (0u64, 0u64, 0u64);
    let mut worst = f64::INFINITY;
    let mut tally = |r: gruss_core::Result<gruss_core::InequalityReport>| {
        checks += 1;
        match r {
            Ok(r) => {
                worst = worst.min(r.worst_margin());
                failures += u64::from(!r.holds);
            }
            Err(_) => errors += 1,
        }
    };
    for _ in 0..100_000 {
        let a = log_uniform(&mut rng, 1e-3, 1e3);
        let b = log_uniform(&mut rng, 1e-3, 1e3);
        for (u, h) in unit.iter().zip(&half) {
            for v in V_GRID {
                tally(check_scalar_refinement(&ctx, SuiteId::Thm1, a, b, v, Some(u)));
            }
            tally(check_scalar_refinement(&ctx, SuiteId::Chain, a, b, 0.5, Some(u)));
            tally(check_scalar_refinement(&ctx, SuiteId::Thm2, a, b, 0.5, Some(h)));
        }
        tally(check_scalar_refinement(&ctx, SuiteId::Cor3, a, b, 0.5, None));
        tally(check_scalar_refinement(&ctx, SuiteId::CorGamma, a, b, 0.5, None));
    }
    Outcome::new(
        failures == 0 && errors == 0,
        format!("{checks} checks, {failures} failures, {errors} errors, worst margin {worst:.3e}"),
    )
}

fn c2_closed_form() -> Outcome {
    let ctx = SuiteContext::default();
    let g = weight(WeightKind::Identity, WeightDomain::Unit);
    let mut rng = SplitMix64::stream(SEED, 2);
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for _ in 0..10_000 {
        let a = log_uniform(&mut rng, 1e-3, 1e3);
        let b = log_uniform(&mut rng, 1e-3, 1e3);
        let v = rng.uniform();
        let term = check_scalar_refinement(&ctx, SuiteId::Thm1, a, b, v, Some(&g))
            .map(|r| r.refinement_gain)
            .unwrap_or(f64::NAN);
        let rel = (term - (arith(a, b, v) - geom(a, b, v)) / 3.0).abs() / (a + b);
        worst = worst.max(rel);
        bad += usize::from(!(rel <= 1e-10));
    }
    Outcome::new(bad == 0, format!("10000 pairs, max |term - closed form|/(a+b) = {worst:.3e}, {bad} beyond 1e-10"))
}

fn c3_operator_suites() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for dim in OP_DIMS {
        let cfg = RunConfig {
            suites: OP_SUITES.to_vec(),
            dim,
            trials: 500,
            seed: SEED,
            ..RunConfig::default()
        };
        let start = Instant::now();
        let report = run_suites(&cfg, &FixedInput::default(), 1).expect("valid run config");
        let failures = report.failure_count();
        let worst = report
            .suites
            .iter()
            .filter_map(|s| s.worst_margin)
            .fold(f64::INFINITY, f64::min);
        ok &= failures == 0;
        parts.push(format!(
            "d={dim}: {} cases, {failures} failures, worst {worst:.2e}, {:.1}s",
            report.records.len(),
            start.elapsed().as_secs_f64()
        ));
    }
    Outcome::new(ok, parts.join("; "))
}

fn c4_commuting_reduction() -> Outcome {
    let ctx = SuiteContext::default();
    let mut worst_ratio: f64 = 0.0;
    let mut checked = 0;
    let mut bad = 0;
    for (si, &suite) in OP_SUITES.iter().enumerate() {
        let domain = match suite {
            SuiteId::OpHeinzLog => WeightDomain::UpperHalf,
            SuiteId::OpPowerHg => WeightDomain::NegUnit,
            _ => WeightDomain::Unit,
        };
        for i in 0..200u64 {
            let dim = 2 + (i % 5) as usize;
            let seed = SEED ^ (si as u64 * 1000 + i);
            let cfg_a = InstanceConfig {
                dim,
                seed,
                ..InstanceConfig::default()
            };
            let cfg_b = InstanceConfig {
                seed: seed.wrapping_mul(0x9E37_79B9).wrapping_add(1),
                ..cfg_a
            };
            let (pair, la, lb) = gen_commuting_pair(&cfg_a, &cfg_b).expect("valid configs");
            let kind = WeightKind::DEFAULTS[i as usize % WeightKind::DEFAULTS.len()];
            let g = weight(kind, domain);
            let g = (suite != SuiteId::OpEntropy).then_some(&g);
            let params = MeanParams::weight(V_GRID[i as usize % V_GRID.len()]).expect("v in [0, 1]");
            let s = [0.1, 0.5, 1.0][i as usize % 3];
            let op = check_operator_refinement(&ctx, suite, &pair, params, g, s).and_then(|r| {
                r.loewner
                    .map(|l| l.min_eig_diff)
                    .ok_or(gruss_core::Error::InvalidParams("no Loewner link".into()))
            });
            let scalar = la
                .iter()
                .zip(&lb)
                .map(|(&a, &b)| check_scalar_counterpart(&ctx, suite, a, b, params, g, s).map(|r| r.links[0].margin))
                .collect::<gruss_core::Result<Vec<f64>>>();
            checked += 1;
            match (op, scalar) {
                (Ok(op), Ok(scalar)) => {
                    let min = scalar.into_iter().fold(f64::INFINITY, f64::min);
                    let norms = 1.0 + pair.a().frobenius_norm() + pair.b().frobenius_norm();
                    let ratio = (op - min).abs() / (1e-9 * norms);
                    worst_ratio = worst_ratio.max(ratio);
                    bad += usize::from(!(ratio <= 1.0));
                }
                _ => bad += 1,
            }
        }
    }
    Outcome::new(
        bad == 0,
        format!("{checked} commuting pairs, {bad} mismatches, worst |diff| = {worst_ratio:.2e} x 1e-9*norms"),
    )
}

fn c5_covariance_sweep() -> Outcome {
    let dim_of = |i: u64| OP_DIMS[i as usize % OP_DIMS.len()];
    let sub = |i: u64, tag: u64| SplitMix64::stream(SEED ^ i, tag).next_u64();
    let mut lines = Vec::new();
    let mut other_failures = 0usize;
    let mut count = |name: &str, n: u64, f: &dyn Fn(u64) -> gruss_core::Result<bool>| -> usize {
        let fails = (0..n).filter(|&i| !f(i).unwrap_or(false)).count();
        lines.push(format!("{name} {fails}/{n}"));
        fails
    };

    other_failures += count("THM51", 10_000, &|i| {
        let d = dim_of(i);
        Ok(check_thm51(&gen_complex(d, sub(i, 1), 1.0)?, &gen_unit_vector(d, sub(i, 2))?)?.holds)
    });
    other_failures += count("KITTANEH", 2_000, &|i| {
        let d = dim_of(i);
        let t = gen_complex(d, sub(i, 3), 1.0)?;
        let xs = (0..5).map(|k| gen_unit_vector(d, sub(i, 10 + k))).collect::<gruss_core::Result<Vec<_>>>()?;
        Ok(check_kittaneh_with(&t, &xs, 90)?.holds)
    });
    other_failures += count("X3_REM11", 10_000, &|i| {
        let d = dim_of(i);
        Ok(check_x3_and_rem11(&pd(sub(i, 4), d).0, &pd(sub(i, 5), d).0, &gen_unit_vector(d, sub(i, 6))?)?.holds)
    });
    other_failures += count("LEMMA_Y1", 100_000, &|i| {
        let mut rng = SplitMix64::stream(SEED ^ i, 7);
        let mut draw = || log_uniform(&mut rng, 1e-3, 1e3);
        Ok(lemma_y1(draw(), draw(), draw(), draw())?.holds)
    });
    let bounded = |i: u64| -> gruss_core::Result<(HermitianMatrix, HermitianMatrix, SpectrumBounds)> {
        let d = dim_of(i);
        let (a, la) = pd(sub(i, 8), d);
        let (b, lb) = pd(sub(i, 9), d);
        Ok((a, b, SpectrumBounds::new(la[0], la[d - 1], lb[0], lb[d - 1])?))
    };
    let thm13_failures = count("THM13", 10_000, &|i| {
        let (a, b, bounds) = bounded(i)?;
        Ok(check_thm13(&a, &b, &bounds, &gen_unit_vector(dim_of(i), sub(i, 20))?, 1e-9)?.holds)
    });
    other_failures += count("GRUSS_OP", 10_000, &|i| {
        let (a, b, bounds) = bounded(i)?;
        Ok(check_gruss_operator(&a, &b, &bounds, &gen_unit_vector(dim_of(i), sub(i, 20))?, 1e-9)?.holds)
    });

    let pass = thm13_failures == 0 && other_failures == 0;
    Outcome {
        pass,
        unexpected: other_failures > 0,
        detail: format!("failures: {}", lines.join(", ")),
    }
}

fn c6_numerical_radius() -> Outcome {
    let w = |t: &ComplexMatrix| numerical_radius(t, DEFAULT_THETA_GRID, DEFAULT_REFINE_TOL).unwrap_or(f64::NAN);
    let nil = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).expect("square");
    let nil_err = (w(&nil) - 0.5).abs();

    let mut rng = SplitMix64::stream(SEED, 6);
    let mut normal_err: f64 = 0.0;
    let mut scale_err: f64 = 0.0;
    for i in 0..100 {
        let d = 2 + i % 5;
        let u = gen_unitary(&mut rng, d);
        let lambdas: Vec<Complex64> = (0..d).map(|_| rng.complex_normal()).collect();
        let diag = ComplexMatrix::from_fn(d, |r, c| if r == c { lambdas[r] } else { Complex64::new(0.0, 0.0) });
        let n = &(&u * &diag) * &u.adjoint();
        let norm = operator_norm(&n).unwrap_or(f64::NAN);
        normal_err = normal_err.max((w(&n) - norm).abs());

        let t = gen_complex(d, SEED ^ i as u64, 1.0).expect("valid dim");
        let alpha = if i % 2 == 0 {
            Complex64::new(rng.uniform_in(-3.0, 3.0), 0.0)
        } else {
            rng.complex_normal() * 2.0
        };
        let scaled = ComplexMatrix::from_fn(d, |r, c| alpha * t[(r, c)]);
        let expected = alpha.norm() * w(&t);
        scale_err = scale_err.max((w(&scaled) - expected).abs() / expected);
    }
    Outcome::new(
        nil_err <= 1e-8 && normal_err <= 1e-8 && scale_err <= 1e-9,
        format!("nilpotent err {nil_err:.1e}, normal max err {normal_err:.1e}, homogeneity max rel err {scale_err:.1e}"),
    )
}

fn c7_crossover() -> Outcome {
    match crossover(&SuiteContext::default(), 1.0001, 1e7, 2000, 1e-12) {
        Ok(r) => {
            let verdict = serde_json::to_value(r.summary.verdict).unwrap_or_default();
            Outcome::new(
                r.bounds_hold && r.worst_relative_margin >= -1e-10,
                format!(
                    "{} points, both bounds hold: {}, worst rel margin {:.2e}; crossovers {:?} vs claimed {}: {}",
                    r.bounds_checked,
                    r.bounds_hold,
                    r.worst_relative_margin,
                    r.summary.crossovers,
                    r.summary.claimed_threshold,
                    verdict.as_str().unwrap_or("?")
                ),
            )
        }
        Err(e) => Outcome::new(false, format!("error: {e}")),
    }
}

fn c8_determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let run = |workers: u32, name: &str| -> Option<Vec<u8>> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_gruss"))
            .args(["run", "--suite", "ALL", "--dim", "4", "--trials", "100", "--seed", "1"])
            .args(["--workers", &workers.to_string(), "--out"])
            .arg(&path)
            .stderr(Stdio::null())
            .status()
            .ok()?;
        // Exit 1 (a failing THM13 case) still writes the full report.
        matches!(status.code(), Some(0 | 1)).then(|| std::fs::read(&path).ok()).flatten()
    };
    let (a, b, c) = (run(1, "a.json"), run(1, "b.json"), run(8, "c.json"));
    match (a, b, c) {
        (Some(a), Some(b), Some(c)) => Outcome::new(
            a == b && a == c,
            format!("{} bytes; repeat identical: {}; workers 1 vs 8 identical: {}", a.len(), a == b, a == c),
        ),
        _ => Outcome::new(false, "the run did not produce a report".into()),
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "scalar theorem sweep", c1_scalar_sweep),
        (2, "closed-form quadrature cross-check", c2_closed_form),
        (3, "operator suites", c3_operator_suites),
        (4, "commuting-reduction oracle", c4_commuting_reduction),
        (5, "covariance sweep", c5_covariance_sweep),
        (6, "numerical radius", c6_numerical_radius),
        (7, "crossover explorer", c7_crossover),
        (8, "determinism", c8_determinism),
    ];
    let mut blocking = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let out = check();
        let secs = start.elapsed().as_secs_f64();
        let status = if out.pass { "PASS" } else { "FAIL" };
        let known = KNOWN_FAILURES.contains(&id);
        let tag = match (out.pass, known) {
            (false, true) if !out.unexpected => " [known]",
            _ => "",
        };
        println!("{status} criterion {id} ({name}){tag}: {} [{secs:.1}s]", out.detail);
        if !out.pass && (!known || out.unexpected) {
            blocking += 1;
        }
    }
    if blocking > 0 {
        println!("acceptance: {blocking} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        println!("acceptance: no unexpected failures");
        ExitCode::SUCCESS
    }
}
