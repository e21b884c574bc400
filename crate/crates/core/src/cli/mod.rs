//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification or simulation property failed,
//! 2 usage or config parse error, 3 domain error, 4 I/O error,
//! 5 insufficient resolution (quadrature degree or order limits).

pub mod config;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::Error;
use crate::simulation::{self, SimulationConfig};
use crate::verify;

use config::RunConfig;
use report::Evaluation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_RESOLUTION: i32 = 5;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "MODECAP_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        Self { code: EXIT_PARSE, message: msg.into() }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Self { code: EXIT_IO, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Aliasing { .. } | Error::Resource(_) => EXIT_RESOLUTION,
            _ => EXIT_DOMAIN,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "modecap", version, about = "Degrees-of-freedom bounds for band-limited wavefields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Overrides the simulation seed.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the bound for one scenario.
    Compute(CommonArgs),
    /// Evaluate the bound over a grid of normalized parameters.
    Sweep(CommonArgs),
    /// Run the wavefield simulation for one scenario.
    Simulate(CommonArgs),
    /// Run the invariant suite.
    Verify(CommonArgs),
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run_from_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(stderr, "error: {}", e.message);
        return e.code;
    }
    match run(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::parse(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // A pool may already exist when running in-process (tests); keep it.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn load_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    match &args.config {
        Some(p) => RunConfig::load(p),
        None => Err(CliError::parse("--config PATH is required for this command")),
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(format!("cannot write to stdout: {e}"))),
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

pub fn run(command: &Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Compute(args) => cmd_compute(args, stdout),
        Command::Sweep(args) => cmd_sweep(args, stdout),
        Command::Simulate(args) => cmd_simulate(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout),
    }
}

fn resolve_output(args: &CommonArgs, cfg: &RunConfig, default: Format) -> (Option<PathBuf>, Format) {
    let out = args.out.clone().or_else(|| cfg.output.path.clone());
    let format = args.format.or(cfg.output.format).unwrap_or(default);
    (out, format)
}

pub fn cmd_compute(args: &CommonArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = load_config(args)?;
    let src = cfg.scenario_source()?;
    let eval = report::evaluate(&src.scenario()?)?;
    let (out, format) = resolve_output(args, &cfg, Format::Json);
    let text = match format {
        Format::Json => json_text(&report::compute_json(&src, &eval)),
        Format::Csv => report::write_csv(std::slice::from_ref(&eval)),
    };
    emit(out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

pub fn cmd_sweep(args: &CommonArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = load_config(args)?;
    let sweep = cfg.sweep()?;
    let mut grid = Vec::new();
    for &a in &sweep.a {
        for &b in &sweep.b {
            for &d in &sweep.d {
                for &rho in &sweep.rho {
                    grid.push(crate::dofcore::NormalizedParams { a, b, d, rho });
                }
            }
        }
    }
    let rows: Vec<Evaluation> = grid
        .par_iter()
        .map(|p| {
            p.validate()?;
            report::evaluate(&p.to_scenario(sweep.mid_freq, sweep.wave_speed))
        })
        .collect::<crate::Result<_>>()?;
    let (out, format) = resolve_output(args, &cfg, Format::Csv);
    let text = match format {
        Format::Csv => report::write_csv(&rows),
        Format::Json => {
            let records: Vec<serde_json::Value> = rows
                .iter()
                .map(|e| {
                    let mut v = serde_json::json!({
                        "a": e.params.a, "b": e.params.b, "d": e.params.d, "rho": e.params.rho,
                        "n_min": e.profile.n_min, "n_max": e.profile.n_max,
                        "t_eff": e.dof.t_eff, "d1": e.dof.d1, "d2": e.dof.d2, "d3": e.dof.d3,
                        "dof_total": e.dof.total,
                    });
                    report::round_json(&mut v);
                    v
                })
                .collect();
            json_text(&serde_json::Value::Array(records))
        }
    };
    emit(out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

pub fn cmd_simulate(args: &CommonArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = load_config(args)?;
    let src = cfg.scenario_source()?;
    let mut sim_cfg: SimulationConfig = cfg
        .simulation
        .ok_or_else(|| CliError::parse("config has no `simulation` block"))?;
    if let Some(seed) = args.seed {
        sim_cfg.seed = seed;
    }
    let scenario = src.scenario()?;
    let eval = report::evaluate(&scenario)?;
    let sim = simulation::run_simulation(&scenario, &sim_cfg)?;
    let (out, format) = resolve_output(args, &cfg, Format::Json);
    let text = match format {
        Format::Json => json_text(&report::simulate_json(&src, &eval, &sim)),
        Format::Csv => report::simulate_csv(&sim),
    };
    emit(out.as_deref(), &text, stdout)?;
    Ok(if sim.passed { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_verify(args: &CommonArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let checks = verify::run_checks(&verify::Mutations::default());
    let format = args.format.unwrap_or(Format::Csv);
    let text = match format {
        Format::Json => json_text(&serde_json::to_value(&checks).expect("json")),
        Format::Csv => {
            let mut s = String::new();
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
            }
            s
        }
    };
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_FAILED })
}
