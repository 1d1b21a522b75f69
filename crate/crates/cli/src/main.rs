use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use seqwit::acceptance;
use seqwit::analysis::{verify_sequence, Engines};
use seqwit::output::{format_real, report_csv, sweep_csv, RunSummary};
use seqwit::sequences::{greedy_sequence, max_horizon, plan_lambda1, Lambda1Plan, DEFAULT_HORIZON_CAP};
use seqwit::states::{FamilyKind, FamilyParams, FamilySpec};
use seqwit::sweep::{expand_grid, run_sweep, SweepGrid};
use seqwit::Error;

const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Parser)]
#[command(name = "seqwit", version, about = "Sequential entanglement witnessing with unsharp measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a sharpness sequence, run it and write the per-pair report
    Run(RunArgs),
    /// Print the planner's lambda1_sq for a target number of pairs
    Plan(PlanArgs),
    /// Feasible horizon over a parameter grid
    Sweep(SweepArgs),
    /// Run the built-in acceptance suite
    Verify(VerifyArgs),
}

#[derive(Args, Default)]
struct FamilyArgs {
    #[arg(long)]
    family: Option<FamilyKind>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Radians
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p3: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Sharpness of the first pair; chosen by the planner when absent
    #[arg(long = "lambda1-sq")]
    lambda1_sq: Option<f64>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    engine: Option<Engines>,
    #[arg(long = "horizon-cap")]
    horizon_cap: Option<usize>,
    /// CSV destination; the JSON summary goes next to it
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    family: Option<FamilyKind>,
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    theta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    p1: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    p2: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    p3: Vec<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long = "horizon-cap")]
    horizon_cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single criterion by key
    #[arg(long)]
    only: Option<String>,
}

/// Shape of a `--config` file. Every field is optional; flags win.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    family: Option<FamilyConfig>,
    epsilon: Option<f64>,
    lambda1_sq: Option<f64>,
    pairs: Option<usize>,
    engine: Option<Engines>,
    horizon_cap: Option<usize>,
    #[serde(alias = "out")]
    output: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyConfig {
    name: FamilyKind,
    alpha: Option<f64>,
    theta: Option<f64>,
    p1: Option<f64>,
    p2: Option<f64>,
    p3: Option<f64>,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MissingParameter { .. }
            | Error::EmptyGrid(_)
            | Error::InvalidFamilyParams(_)
            | Error::InvalidSharpness(_)
            | Error::InvalidEpsilon(_)
            | Error::Lambda1OutOfRange { .. }
            | Error::Lambda1BelowThreshold { .. }
            | Error::EmptySequence
            | Error::DegenerateFamily(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn load_config(path: Option<&Path>) -> Result<ConfigFile, Failure> {
    let Some(path) = path else { return Ok(ConfigFile::default()) };
    let text = fs::read_to_string(path).map_err(|e| Failure::invalid(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("invalid config {}: {e}", path.display())))
}

fn resolve_family(flags: &FamilyArgs, config: &ConfigFile) -> Result<FamilySpec, Failure> {
    let from_config = config.family.as_ref();
    let kind = flags
        .family
        .or(from_config.map(|f| f.name))
        .ok_or_else(|| Failure::invalid("missing --family"))?;
    let pick = |flag: Option<f64>, cfg: fn(&FamilyConfig) -> Option<f64>| flag.or(from_config.and_then(cfg));
    let params = FamilyParams {
        alpha: pick(flags.alpha, |f| f.alpha),
        theta: pick(flags.theta, |f| f.theta),
        p1: pick(flags.p1, |f| f.p1),
        p2: pick(flags.p2, |f| f.p2),
        p3: pick(flags.p3, |f| f.p3),
    };
    Ok(kind.build(&params)?)
}

fn resolve_epsilon(flag: Option<f64>, config: &ConfigFile) -> Result<f64, Failure> {
    let eps = flag.or(config.epsilon).unwrap_or(DEFAULT_EPSILON);
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidEpsilon(eps).into());
    }
    Ok(eps)
}

fn resolve_pairs(flag: Option<usize>, config: &ConfigFile) -> Result<usize, Failure> {
    match flag.or(config.pairs) {
        None => Err(Failure::invalid("missing --pairs")),
        Some(0) => Err(Failure::invalid("pairs must be >= 1")),
        Some(n) => Ok(n),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::failed(format!("cannot write {}: {e}", path.display())))
}

fn cmd_run(args: RunArgs) -> Outcome {
    let config = load_config(args.config.as_deref())?;
    let family = resolve_family(&args.family, &config)?;
    let epsilon = resolve_epsilon(args.epsilon, &config)?;
    let pairs = resolve_pairs(args.pairs, &config)?;
    let engine = args.engine.or(config.engine).unwrap_or(Engines::Both);
    let cap = args.horizon_cap.or(config.horizon_cap).unwrap_or(DEFAULT_HORIZON_CAP);
    let out = args.out.or(config.output);

    let lambda1_sq = match args.lambda1_sq.or(config.lambda1_sq) {
        Some(l) => l,
        None => match plan_lambda1(&family, epsilon, pairs)? {
            Lambda1Plan::Feasible { lambda1_sq } => lambda1_sq,
            Lambda1Plan::Infeasible => {
                // run as far as the family allows; the exit status reports the shortfall
                let horizon = max_horizon(&family, epsilon, cap.min(pairs))?;
                if horizon == 0 {
                    return Err(Failure::failed(format!("no sharpness sequence detects even one pair for {}", family.name())));
                }
                eprintln!("{pairs} pairs infeasible; running the longest feasible horizon ({horizon})");
                plan_lambda1(&family, epsilon, horizon)?
                    .lambda1_sq()
                    .ok_or_else(|| Failure::failed("planner failed at the feasible horizon"))?
            }
        },
    };

    let plan = greedy_sequence(&family, epsilon, lambda1_sq, pairs)?;
    let report = verify_sequence(&family, &plan, engine)?;
    let csv = report_csv(&report);
    let summary = RunSummary::new(&report, pairs);
    let json = summary.to_json();
    match out {
        Some(path) => {
            write_file(&path, &csv)?;
            write_file(&path.with_extension("json"), &(json + "\n"))?;
        }
        None => {
            print!("{csv}");
            eprintln!("{json}");
        }
    }
    Ok(if summary.full_horizon { 0 } else { 1 })
}

fn cmd_plan(args: PlanArgs) -> Outcome {
    let config = load_config(args.config.as_deref())?;
    let family = resolve_family(&args.family, &config)?;
    let epsilon = resolve_epsilon(args.epsilon, &config)?;
    let pairs = resolve_pairs(args.pairs, &config)?;
    match plan_lambda1(&family, epsilon, pairs)? {
        Lambda1Plan::Feasible { lambda1_sq } => {
            println!("{}", format_real(lambda1_sq));
            Ok(0)
        }
        Lambda1Plan::Infeasible => {
            println!("infeasible");
            Ok(1)
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Outcome {
    let kind = args.family.ok_or_else(|| Failure::invalid("missing --family"))?;
    let epsilon = resolve_epsilon(args.epsilon, &ConfigFile::default())?;
    let cap = args.horizon_cap.unwrap_or(DEFAULT_HORIZON_CAP);
    let grid = SweepGrid { alpha: args.alpha, theta: args.theta, p1: args.p1, p2: args.p2, p3: args.p3 };
    let points = expand_grid(kind, &grid)?;
    let rows = run_sweep(&points, epsilon, cap)?;
    let csv = sweep_csv(&rows);
    match args.out {
        Some(path) => write_file(&path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    if let Some(key) = args.only.as_deref() {
        if !acceptance::criteria().iter().any(|c| c.key == key) {
            let keys: Vec<&str> = acceptance::criteria().iter().map(|c| c.key).collect();
            return Err(Failure::invalid(format!("unknown criterion `{key}` (expected one of {})", keys.join(", "))));
        }
    }
    let results = acceptance::run(args.only.as_deref());
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    for r in &results {
        let _ = writeln!(lock, "{r}");
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.key).collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("failed: {}", failed.join(", "));
        Ok(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
