//! Command-line front end.
//!
//! Exit codes: 0 on success (including `--help`/`--version`), 1 for usage
//! errors (bad flags or malformed flag values), 2 for runtime failures
//! (unreadable or invalid config files, rejected sweep parameters, I/O).

use crate::config::{load_config, serialize_config};
use crate::engine::{run_sweep, SweepConfig};
use crate::output::{csv_string, render_plot, write_csv};
use crate::schemes::{Scheme, SchemeConfig};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_RUNTIME: i32 = 2;

/// Name of the environment variable consulted for the seed when the
/// `--seed` flag is absent. Takes precedence over the config file.
pub const SEED_ENV_VAR: &str = "UDNSIM_SEED";

#[derive(Parser)]
#[command(
    name = "udnsim",
    version,
    about = "Monte Carlo sum-rate sweeps for ultra-dense mmWave small-cell networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a density sweep and emit a CSV table
    Run(RunArgs),
    /// Parse a config file, check its constraints, and print the normalized form
    Validate {
        /// Config file to check
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the built-in defaults in config-file form
    Defaults,
}

#[derive(Args)]
struct RunArgs {
    /// Config file with [radio], [geometry], [sweep] and [schemes] sections
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated SBS densities per km^2, ascending
    #[arg(long)]
    densities: Option<String>,
    /// Monte Carlo trials per density point
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: Option<u64>,
    /// Base RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated schemes to score (OMA_HD, NOMA_HD, NOMA_FD)
    #[arg(long)]
    schemes: Option<String>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render an SVG chart of the sweep here
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Worker threads for trial evaluation (0 = library default)
    #[arg(long)]
    workers: Option<usize>,
}

/// Parses `args` and executes the selected subcommand, returning the
/// process exit code. The first element of `args` is the program name.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Validate { config } => cmd_validate(&config),
        Command::Defaults => {
            print!("{}", serialize_config(&SweepConfig::default()));
            EXIT_OK
        }
    }
}

fn fail_usage(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn fail_runtime(err: &dyn std::fmt::Display) -> i32 {
    eprintln!("error: {err}");
    EXIT_RUNTIME
}

fn cmd_run(args: &RunArgs) -> i32 {
    let mut cfg = match &args.config {
        Some(path) => match load_config(path) {
            Ok(cfg) => cfg,
            Err(e) => return fail_runtime(&e),
        },
        None => SweepConfig::default(),
    };

    if let Some(list) = &args.densities {
        match parse_density_list(list) {
            Ok(densities) => cfg.densities_per_km2 = densities,
            Err(msg) => return fail_usage(&msg),
        }
    }
    if let Some(list) = &args.schemes {
        match parse_scheme_list(list, &cfg.schemes) {
            Ok(schemes) => cfg.schemes = schemes,
            Err(msg) => return fail_usage(&msg),
        }
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(workers) = args.workers {
        cfg.workers = workers;
    }
    match resolve_seed(args.seed) {
        Ok(Some(seed)) => cfg.base_seed = seed,
        Ok(None) => {}
        Err(msg) => return fail_usage(&msg),
    }

    let result = match run_sweep(&cfg) {
        Ok(result) => result,
        Err(e) => return fail_runtime(&e),
    };

    match &args.out {
        Some(path) => {
            if let Err(e) = write_csv(&result, path) {
                return fail_runtime(&e);
            }
        }
        None => print!("{}", csv_string(&result)),
    }
    if let Some(path) = &args.plot {
        if let Err(e) = render_plot(&result, path) {
            return fail_runtime(&e);
        }
    }
    EXIT_OK
}

fn cmd_validate(path: &Path) -> i32 {
    match load_config(path) {
        Ok(cfg) => {
            print!("{}", serialize_config(&cfg));
            EXIT_OK
        }
        Err(e) => fail_runtime(&e),
    }
}

fn parse_density_list(list: &str) -> Result<Vec<f64>, String> {
    list.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .map_err(|_| format!("invalid density value {tok:?} in --densities"))
        })
        .collect()
}

/// Resolves scheme tokens, keeping any per-scheme alpha overrides already
/// present in the config so `--schemes` only selects and orders the runs.
fn parse_scheme_list(list: &str, existing: &[SchemeConfig]) -> Result<Vec<SchemeConfig>, String> {
    list.split(',')
        .map(|tok| {
            let scheme: Scheme = tok.parse().map_err(|e: crate::Error| e.to_string())?;
            Ok(existing
                .iter()
                .find(|sc| sc.scheme == scheme)
                .copied()
                .unwrap_or_else(|| SchemeConfig::defaults_for(scheme)))
        })
        .collect()
}

/// Seed precedence: `--seed` flag, then the environment, then whatever the
/// config file (or default) already holds. `Ok(None)` means "leave as is".
fn resolve_seed(flag: Option<u64>) -> Result<Option<u64>, String> {
    if let Some(seed) = flag {
        return Ok(Some(seed));
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| format!("{SEED_ENV_VAR} must be an unsigned integer, got {raw:?}")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("{SEED_ENV_VAR} is not valid unicode: {e}")),
    }
}
