use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use gruss_cli::config::{parse_suites, parse_weights};
use gruss_cli::sweep::{crossover, sweep, write_rows, SweepSpec};
use gruss_cli::{classify, load_matrix, replay, run_suites, FixedInput, Format, Outcome, RunConfig};
use gruss_core::{SuiteId, WeightKind};

#[derive(Parser)]
#[command(name = "gruss", version, about = "Check refined mean and Grüss-type inequalities on seeded instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run suites over a seeded random corpus and write a report.
    Run(RunArgs),
    /// Evaluate one scalar inequality over log-spaced x = b/a and write CSV rows.
    Sweep(SweepArgs),
    /// Locate where the two lower bounds on (x+1)/2 - sqrt(x) swap order.
    Crossover(CrossoverArgs),
    /// Re-run one case from its failure digest.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct Tolerances {
    /// Relative Loewner tolerance.
    #[arg(long, default_value_t = gruss_core::linalg::DEFAULT_PSD_REL_TOL)]
    tol_psd: f64,
    #[arg(long, default_value_t = gruss_core::QuadratureConfig::default().atol)]
    quad_atol: f64,
    #[arg(long, default_value_t = gruss_core::QuadratureConfig::default().rtol)]
    quad_rtol: f64,
}

#[derive(Args)]
struct Inputs {
    /// Matrix JSON replacing the generated A (or T).
    #[arg(long = "a", value_name = "PATH")]
    a: Option<PathBuf>,
    /// Matrix JSON replacing the generated B.
    #[arg(long = "b", value_name = "PATH")]
    b: Option<PathBuf>,
}

impl Inputs {
    fn load(&self) -> Result<FixedInput> {
        Ok(FixedInput {
            a: self.a.as_deref().map(load_matrix).transpose()?,
            b: self.b.as_deref().map(load_matrix).transpose()?,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    /// ALL or a comma-separated list of suite ids.
    #[arg(long, default_value = "ALL", value_parser = parse_suites)]
    suite: std::vec::Vec<SuiteId>,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated weight kinds, e.g. IDENTITY,POWER:3.
    #[arg(long, value_parser = parse_weights)]
    weights: Option<std::vec::Vec<WeightKind>>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses one per processor.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Re-run a single case instead of the corpus.
    #[arg(long, value_name = "DIGEST")]
    replay: Option<String>,
    #[command(flatten)]
    tol: Tolerances,
    #[command(flatten)]
    inputs: Inputs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    suite: SuiteId,
    #[arg(long)]
    lo: f64,
    #[arg(long)]
    hi: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Weight parameter of THM1.
    #[arg(long, default_value_t = 0.5)]
    v: f64,
    #[arg(long, value_parser = parse_weights)]
    weights: Option<std::vec::Vec<WeightKind>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Args)]
struct CrossoverArgs {
    #[arg(long, default_value_t = 1.0001)]
    lo: f64,
    #[arg(long, default_value_t = 1e7)]
    hi: f64,
    #[arg(long, default_value_t = 2000)]
    grid: usize,
    /// Relative width at which bisection stops.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Digest printed in a report's failure list.
    #[arg(value_name = "DIGEST", required_unless_present = "replay")]
    digest: Option<String>,
    #[arg(long, value_name = "DIGEST", conflicts_with = "digest")]
    replay: Option<String>,
    #[arg(long, value_parser = parse_weights)]
    weights: Option<std::vec::Vec<WeightKind>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: Tolerances,
    #[command(flatten)]
    inputs: Inputs,
}

fn base_config(tol: &Tolerances, weights: Option<Vec<WeightKind>>) -> RunConfig {
    let defaults = RunConfig::default();
    RunConfig {
        tol_psd: tol.tol_psd,
        quad_atol: tol.quad_atol,
        quad_rtol: tol.quad_rtol,
        weights: weights.unwrap_or(defaults.weights.clone()),
        ..defaults
    }
}

fn with_output(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
        }
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    with_output(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn do_replay(cfg: &RunConfig, inputs: &Inputs, digest: &str, out: Option<&Path>) -> Result<Outcome> {
    let r = replay(cfg, &inputs.load()?, digest)?;
    write_json(out, &r)?;
    Ok(if r.report.holds { Outcome::Success } else { Outcome::Failure })
}

fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Run(args) => {
            let cfg = RunConfig {
                suites: args.suite.clone(),
                dim: args.dim,
                trials: args.trials,
                seed: args.seed,
                format: args.format,
                ..base_config(&args.tol, args.weights.clone())
            };
            if let Some(digest) = &args.replay {
                return do_replay(&cfg, &args.inputs, digest, args.out.as_deref());
            }
            let report = run_suites(&cfg, &args.inputs.load()?, args.workers)?;
            with_output(args.out.as_deref(), |w| report.write(cfg.format, w))?;
            let outcome = report.outcome();
            if outcome != Outcome::Success {
                eprintln!("{} failing case(s)", report.failure_count());
            }
            Ok(outcome)
        }
        Command::Sweep(args) => {
            let cfg = base_config(&args.tol, None);
            let spec = SweepSpec {
                suite: args.suite,
                lo: args.lo,
                hi: args.hi,
                points: args.points,
                v: args.v,
                weights: args.weights.unwrap_or_else(|| vec![WeightKind::Identity]),
            };
            let rows = sweep(&cfg.context()?, &spec)?;
            with_output(args.out.as_deref(), |w| write_rows(&rows, w))?;
            Ok(if rows.iter().all(|r| r.holds) { Outcome::Success } else { Outcome::Failure })
        }
        Command::Crossover(args) => {
            let ctx = RunConfig::default().context()?;
            let report = crossover(&ctx, args.lo, args.hi, args.grid, args.tol)?;
            write_json(args.out.as_deref(), &report)?;
            Ok(if report.bounds_hold { Outcome::Success } else { Outcome::Failure })
        }
        Command::Replay(args) => {
            let cfg = base_config(&args.tol, args.weights.clone());
            let digest = args.digest.as_deref().or(args.replay.as_deref()).expect("clap requires a digest");
            do_replay(&cfg, &args.inputs, digest, args.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err).code())
        }
    }
}
