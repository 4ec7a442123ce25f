//! `loewner`: seeded verification suites, decompositions and
//! operator-monotonicity searches.
//!
//! Exit codes: 0 when every expected property held, 1 when a mathematical
//! violation was found, 2 on usage or input errors.

mod report;
mod suites;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use loewner_core::constructions::{lemma1_decompose, lemma2_decompose, matrix_chain, scalar_decompose};
use loewner_core::function::Table;
use loewner_core::monotonicity::{characterize_via_hypothesis, numeric_operator_monotone, MonotoneConfig};
use loewner_core::{HermitianMatrix, MeanRepresentation, ScalarFunction};
use serde::Serialize;
use serde_json::json;

use crate::suites::SuiteParams;

#[derive(Parser)]
#[command(name = "loewner", version, about = "Matrix mean inequalities and operator monotonicity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded property suite
    Verify(VerifyArgs),
    /// Decompose scalars or matrices
    Decompose {
        #[command(subcommand)]
        kind: DecomposeKind,
    },
    /// Search for violations of operator monotonicity
    CheckMonotone(MonotoneArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    ReverseCauchy,
    HiaiAndo,
    Hok,
    MeansAxioms,
    Constructions,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Relative tolerance for Loewner comparisons
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Registry name, e.g. sqrt, power:0.3, logmean, square
    #[arg(long, default_value = "sqrt")]
    function: String,
    /// Mean representation JSON (hok and means-axioms)
    #[arg(long)]
    mean: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Succeed only if a violation is found
    #[arg(long)]
    expect_violation: bool,
}

#[derive(Subcommand)]
enum DecomposeKind {
    /// Split `a ≤ b ≤ √2·a` into positive scalars
    Scalar {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
    },
    /// Decompose `I ≤ A ≤ √2·I`
    Lemma1 {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Decompose `A ≤ B ≤ √2·A`
    Lemma2 {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
    },
    /// Chain from `A` to `B ≥ A` with ratio at most √2 per link
    Chain {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
    },
}

#[derive(Args)]
struct MonotoneArgs {
    #[arg(long, conflicts_with = "table", required_unless_present = "table")]
    function: Option<String>,
    /// Sampled function: `{"label": .., "points": [[t, f(t)], ..]}`
    #[arg(long)]
    table: Option<PathBuf>,
    /// Config JSON; explicit flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Required unless the config file carries one
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Also run the hypothesis-based search and report agreement
    #[arg(long)]
    characterize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    expect_violation: bool,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn verify(args: VerifyArgs) -> Result<bool> {
    if args.trials == 0 || args.dims.is_empty() || args.dims.contains(&0) {
        bail!("--trials and every entry of --dims must be positive");
    }
    let params = SuiteParams {
        dims: args.dims,
        trials: args.trials,
        seed: args.seed,
        tol: args.tol,
        function: ScalarFunction::from_name(&args.function)?,
        mean: args.mean.as_deref().map(read_json::<MeanRepresentation>).transpose()?,
    };
    let start = Instant::now();
    let mut report = match args.suite {
        Suite::ReverseCauchy => suites::reverse_cauchy(&params),
        Suite::HiaiAndo => suites::hiai_ando(&params),
        Suite::Hok => suites::hok(&params),
        Suite::MeansAxioms => suites::means_axioms(&params),
        Suite::Constructions => suites::constructions(&params),
    }?;
    report.expect_violation = args.expect_violation;
    report.wall_time_s = start.elapsed().as_secs_f64();
    emit(&report, args.out.as_deref())?;
    Ok(report.succeeded())
}

fn decompose(kind: DecomposeKind) -> Result<()> {
    match kind {
        DecomposeKind::Scalar { a, b } => {
            let (x, y) = scalar_decompose(a, b)?;
            let mean_residual = (0.5 * (x + y) - a).abs();
            let reconstruction_residual = ((x * y).sqrt() + 0.5 * (y - x) - b).abs();
            emit(
                &json!({
                    "x": x,
                    "y": y,
                    "mean_residual": mean_residual,
                    "reconstruction_residual": reconstruction_residual,
                }),
                None,
            )
        }
        DecomposeKind::Lemma1 { matrix } => {
            let a: HermitianMatrix = read_json(&matrix)?;
            emit(&lemma1_decompose(&a)?, None)
        }
        DecomposeKind::Lemma2 { a, b } => {
            let (a, b): (HermitianMatrix, HermitianMatrix) = (read_json(&a)?, read_json(&b)?);
            emit(&lemma2_decompose(&a, &b)?, None)
        }
        DecomposeKind::Chain { a, b } => {
            let (a, b): (HermitianMatrix, HermitianMatrix) = (read_json(&a)?, read_json(&b)?);
            emit(&matrix_chain(&a, &b)?, None)
        }
    }
}

fn monotone_config(args: &MonotoneArgs) -> Result<MonotoneConfig> {
    let mut cfg = match (&args.config, args.seed) {
        (Some(path), _) => read_json::<MonotoneConfig>(path)?,
        (None, Some(seed)) => MonotoneConfig::new(seed),
        (None, None) => bail!("--seed is required (or a --config file with a seed)"),
    };
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.t_min {
        cfg.t_min = v;
    }
    if let Some(v) = args.t_max {
        cfg.t_max = v;
    }
    if let Some(v) = args.n_max {
        cfg.n_max = v;
    }
    if let Some(v) = &args.dims {
        cfg.dims = v.clone();
    }
    if let Some(v) = args.trials {
        cfg.trials = v;
    }
    if let Some(v) = args.rel_tol {
        cfg.rel_tol = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn check_monotone(args: MonotoneArgs) -> Result<bool> {
    let f = match (&args.function, &args.table) {
        (Some(name), _) => ScalarFunction::from_name(name)?,
        (None, Some(path)) => ScalarFunction::tabulated(read_json::<Table>(path)?)?,
        (None, None) => bail!("one of --function or --table is required"),
    };
    let cfg = monotone_config(&args)?;
    let violated = if args.characterize {
        let r = characterize_via_hypothesis(&f, &cfg)?;
        emit(&r, args.out.as_deref())?;
        r.numeric.is_violated() || r.hypothesis.is_violated()
    } else {
        let v = numeric_operator_monotone(&f, &cfg)?;
        emit(&v, args.out.as_deref())?;
        v.is_violated()
    };
    Ok(violated == args.expect_violation)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Decompose { kind } => decompose(kind).map(|_| true),
        Command::CheckMonotone(args) => check_monotone(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
