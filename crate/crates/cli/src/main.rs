use std::path::PathBuf;
use std::process::ExitCode;

use burgers_born::experiments::{self, ExperimentConfig, ExperimentKind};
use burgers_born::Error;
use clap::{Parser, Subcommand};

/// Reproducible verification runs for stochastic diffusions, Burgers
/// equations, Cole–Hopf transforms and the Born rule.
#[derive(Parser)]
#[command(name = "burgers-born", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its artifacts.
    Run {
        experiment: String,
        /// JSON config; `experiment` may be omitted from the file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: runs/<experiment>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the global pool.
        #[arg(long, env = "BURGERS_BORN_THREADS")]
        threads: Option<usize>,
    },
    /// List the experiments.
    List,
    /// Print what an experiment exercises and its thresholds.
    Describe { experiment: String },
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn parse_kind(name: &str) -> Result<ExperimentKind, Error> {
    ExperimentKind::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
        Error::Config(format!(
            "unknown experiment `{name}` (known: {})",
            known.join(", ")
        ))
    })
}

fn load_config(kind: ExperimentKind, path: Option<&PathBuf>) -> Result<ExperimentConfig, Error> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::new(kind));
    };
    let text = std::fs::read_to_string(path)?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    match obj.get("experiment").and_then(|v| v.as_str()) {
        Some(name) if name != kind.name() => {
            return Err(Error::Config(format!(
                "config is for experiment `{name}` but `{kind}` was requested"
            )))
        }
        _ => {
            obj.insert("experiment".into(), kind.name().into());
        }
    }
    ExperimentConfig::from_json(&value.to_string())
}

/// Setup problems (bad config, unreadable files) exit with 2; solver
/// failures are reported as a failed run.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::Csv(_)
        | Error::InvalidGrid(_) => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

fn run(
    experiment: &str,
    config: Option<&PathBuf>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    threads: Option<usize>,
) -> Result<bool, Error> {
    let kind = parse_kind(experiment)?;
    let mut cfg = load_config(kind, config)?;
    if seed.is_some() {
        cfg.seed = seed;
    }
    if out.is_some() {
        cfg.output_dir = out;
    }
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("`--threads` must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let summary = experiments::run(&cfg)?;
    for c in &summary.checks {
        println!("{}", c.describe());
    }
    let dir = cfg.resolved()?.output_dir();
    println!(
        "{}: {} ({} checks), artifacts in {}",
        kind,
        if summary.passed { "PASS" } else { "FAIL" },
        summary.checks.len(),
        dir.display()
    );
    Ok(summary.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => {
            for k in ExperimentKind::ALL {
                println!("{:<22} {}", k.name(), experiments::synopsis(k));
            }
            Ok(true)
        }
        Command::Describe { experiment } => parse_kind(&experiment).map(|k| {
            println!("{}", experiments::description(k));
            true
        }),
        Command::Run {
            experiment,
            config,
            seed,
            out,
            threads,
        } => run(&experiment, config.as_ref(), seed, out, threads),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
