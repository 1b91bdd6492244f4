//! Command-line front end. The binary only forwards to [`main_with_args`].

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::acceptance::{self, Suite};
use crate::error::Error;
use crate::scenario::{self, ScenarioConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Overrides the config seed when set.
pub const SEED_ENV: &str = "HKIT_SEED";

#[derive(Debug, Parser)]
#[command(name = "hkit", version, about = "Holonomies of dynamical-invariant bases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and write its artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in checks; exits 1 if any fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
    /// Re-run a config over a list of values for one field.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// A params key (e.g. theta0) or grid.t1, grid.n_steps, seed.
        #[arg(long)]
        axis: String,
        /// Comma-separated; accepts forms like pi/3 or 2pi/3.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> i32 {
    if scenario::is_config_error(e) {
        EXIT_CONFIG
    } else {
        EXIT_NUMERICAL
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    exit_code(e)
}

/// Reads the config and applies the seed override.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, Error> {
    let mut cfg = ScenarioConfig::load(path)?;
    if let Ok(raw) = std::env::var(SEED_ENV) {
        cfg.seed = raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter { field: SEED_ENV.into(), reason: format!("`{raw}` is not an unsigned integer") })?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(config: &Path, out: &Path) -> i32 {
    let cfg = match load_config(config) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let outcome = match scenario::execute(&cfg) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    if let Err(e) = scenario::write_outputs(&outcome, out) {
        return fail(&e);
    }
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let phases: Vec<String> = outcome.holonomy.eigenphases.iter().map(|p| format!("{p:.10}")).collect();
    println!("eigenphases {}", phases.join(" "));
    EXIT_OK
}

fn sweep(config: &Path, axis: &str, values: &str, out: &Path) -> i32 {
    let cfg = match load_config(config) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let values: Result<Vec<f64>, Error> = values.split(',').filter(|s| !s.trim().is_empty()).map(scenario::parse_value).collect();
    let values = match values {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let rows = match scenario::sweep(&cfg, axis, &values) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    if let Err(e) = std::fs::create_dir_all(out) {
        return fail(&Error::InvalidParameter { field: "out".into(), reason: e.to_string() });
    }
    if let Err(e) = scenario::write_sweep(axis, &rows, &out.join("sweep.csv")) {
        return fail(&e);
    }
    let failed = rows.iter().filter(|r| r.result.is_err()).count();
    println!("{} points, {} failed", rows.len(), failed);
    EXIT_OK
}

fn verify(suite: Suite) -> i32 {
    let seed = match std::env::var(SEED_ENV) {
        Ok(raw) => match raw.trim().parse() {
            Ok(s) => s,
            Err(_) => {
                eprintln!("error: {SEED_ENV} = `{raw}` is not an unsigned integer");
                return EXIT_CONFIG;
            }
        },
        Err(_) => acceptance::DEFAULT_SEED,
    };
    let results = acceptance::run_suite(suite, seed);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} checks, {} failed", results.len(), failed);
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

/// Parses `args` (program name first) and runs the command, returning the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Run { config, out } => run(&config, &out),
        Command::Verify { suite } => verify(suite),
        Command::Sweep { config, axis, values, out } => sweep(&config, &axis, &values, &out),
    }
}
