use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hencky::config::{parse_config_with_mode, ConfigError, Mode};
use hencky::driver::{run, RunError, RunOutcome, EXIT_CONFIG_ERROR};

/// Exponentiated Hencky elasto-plasticity: material-point simulation,
/// rank-one convexity scans and verification suites.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Overrides the seed of the configuration file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Drive a material point along a load path and write its history as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan rank-one second derivatives over a region and write a JSON report.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites (a name or `all`) and write a JSON report.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(cli: Cli) -> Result<RunOutcome, RunError> {
    let (mode, config_path, out, suite) = match cli.command {
        Command::Simulate { config, out } => (Mode::Simulate, Some(config), out, None),
        Command::Scan { config, out } => (Mode::Scan, Some(config), out, None),
        Command::Verify { suite, config, out } => (Mode::Verify, config, out, suite),
    };
    let text = match &config_path {
        Some(p) => std::fs::read_to_string(p).map_err(|source| RunError::Io { path: p.clone(), source })?,
        None => "{}".to_string(),
    };
    let mut config = parse_config_with_mode(&text, Some(mode))?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(suite) = suite {
        config.verify.suites = vec![suite];
    }
    let out = out.or_else(|| config.out.clone()).ok_or_else(|| {
        RunError::Config(ConfigError::Validation(vec![hencky::config::ValidationError::new("out", "give --out or set `out` in the config")]))
    })?;
    run(&config, &out)
}

fn main() -> ExitCode {
    let outcome = execute(Cli::parse());
    let code = match &outcome {
        Ok(o) => {
            match o {
                RunOutcome::Simulated { rows } => eprintln!("wrote {rows} history rows"),
                RunOutcome::Scanned { min_d2, witness } => eprintln!("min d2 = {min_d2:?}, witness found: {witness}"),
                RunOutcome::Verified { pass } => eprintln!("verification {}", if *pass { "passed" } else { "FAILED" }),
            }
            o.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(u8::try_from(code).unwrap_or(EXIT_CONFIG_ERROR as u8))
}
