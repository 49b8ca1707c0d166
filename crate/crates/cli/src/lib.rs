//! Command-line front end for `xyzchain-core`.
//!
//! Three subcommands: `sweep` evaluates a parameter grid and writes CSV,
//! `critical` locates a critical field or temperature, and `validate` runs
//! the built-in oracle suites. Flags and `--config` files are first reduced to
//! one [`settings::Settings`] map so both routes yield the same configuration.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 numerical failure, 4 no
//! transition in the bracket, 5 validation failure.

pub mod commands;
pub mod config;
pub mod exit;
pub mod output;
pub mod settings;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{CriticalConfig, RunConfig, THREADS_ENV};
pub use exit::{CliError, Exit};
pub use settings::Settings;

#[derive(Parser, Debug)]
#[command(
    name = "xyzchain",
    version,
    about = "Thermal pairwise concurrence of anisotropic Heisenberg XYZ chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate concurrence on a grid of up to two axes and write CSV.
    Sweep(SweepArgs),
    /// Locate the zero-temperature critical field (bc) or a critical temperature (tc).
    Critical(CriticalArgs),
    /// Run the oracle and invariant suites.
    Validate(ValidateArgs),
}

/// Model parameters shared by `sweep` and `critical`. Values are kept as text
/// and parsed together with config-file entries.
#[derive(Args, Debug, Default)]
pub struct ModelArgs {
    /// File of `key = value` lines (`#` comments); flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Number of sites [default: 2].
    #[arg(long, value_name = "SITES")]
    pub n: Option<String>,
    /// Mean in-plane coupling J = (Jx + Jy)/2; use with --gamma.
    #[arg(long, allow_negative_numbers = true)]
    pub j: Option<String>,
    /// Anisotropy (Jx − Jy)/(Jx + Jy); use with --j.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<String>,
    /// x coupling; use with --jy instead of --j/--gamma.
    #[arg(long, allow_negative_numbers = true)]
    pub jx: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub jy: Option<String>,
    /// z coupling [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub jz: Option<String>,
    /// Longitudinal field [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<String>,
    /// open or periodic [default: open for 2 sites, periodic otherwise].
    #[arg(long)]
    pub boundary: Option<String>,
    /// Qubit pair to trace down to, as `a,b` [default: 0,1].
    #[arg(long, value_name = "A,B")]
    pub pair: Option<String>,
    /// generic or closed-form (two sites only) [default: generic].
    #[arg(long)]
    pub pipeline: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Temperature when T is not an axis.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<String>,
    /// Grid axis `NAME:min:max:steps` with NAME in B, T, JZ, GAMMA, J; at most two.
    #[arg(long, value_name = "NAME:MIN:MAX:STEPS", allow_hyphen_values = true)]
    pub axis: Vec<String>,
    /// Output CSV path; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads (0 or 1 runs sequentially); output never depends on it.
    /// Falls back to the XYZCHAIN_THREADS environment variable.
    #[arg(long)]
    pub threads: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// bc (critical field at T = 0) or tc (critical temperature).
    #[arg(long)]
    pub kind: Option<String>,
    /// Search interval `lo:hi` in B (bc) or T (tc).
    #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
    pub bracket: Option<String>,
    /// For tc: first_above (lowest falling edge) or last_below (highest) [default: first_above].
    #[arg(long)]
    pub which: Option<String>,
    /// Bisection tolerance [default: 1e-6].
    #[arg(long)]
    pub tol: Option<String>,
    /// Concurrence counted as entangled above this threshold [default: 1e-6].
    #[arg(long)]
    pub eps_zero: Option<String>,
    /// Scan resolution [default: 200].
    #[arg(long)]
    pub points: Option<String>,
    /// Also write the scanned curve as CSV.
    #[arg(long, value_name = "FILE")]
    pub scan_out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct ValidateArgs {
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed of the random draws.
    #[arg(long)]
    pub seed: Option<String>,
    /// Random draws per suite.
    #[arg(long)]
    pub draws: Option<String>,
    /// Inject a known fault; the run must then FAIL.
    #[arg(long)]
    pub self_test: bool,
}

fn push(s: &mut Settings, key: &str, value: &Option<String>) {
    if let Some(v) = value {
        s.push(key, v.clone(), format!("--{}", key.replace('_', "-")));
    }
}

fn push_path(s: &mut Settings, key: &str, value: &Option<PathBuf>) {
    push(s, key, &value.as_ref().map(|p| p.display().to_string()));
}

impl ModelArgs {
    fn push_into(&self, s: &mut Settings) {
        for (k, v) in [
            ("n", &self.n),
            ("j", &self.j),
            ("gamma", &self.gamma),
            ("jx", &self.jx),
            ("jy", &self.jy),
            ("jz", &self.jz),
            ("b", &self.b),
            ("boundary", &self.boundary),
            ("pair", &self.pair),
            ("pipeline", &self.pipeline),
        ] {
            push(s, k, v);
        }
    }
}

/// Config file (if any) overlaid with the explicit flags.
fn layered(config: &Option<PathBuf>, flags: Settings) -> Result<Settings, CliError> {
    let base = match config {
        Some(path) => Settings::load(path)?,
        None => Settings::new(),
    };
    Ok(base.overlay(flags))
}

impl SweepArgs {
    pub fn settings(&self) -> Result<Settings, CliError> {
        let mut s = Settings::new();
        self.model.push_into(&mut s);
        push(&mut s, "t", &self.t);
        for a in &self.axis {
            s.push("axis", a.clone(), "--axis");
        }
        push_path(&mut s, "out", &self.out);
        push(&mut s, "threads", &self.threads);
        layered(&self.model.config, s)
    }
}

impl CriticalArgs {
    pub fn settings(&self) -> Result<Settings, CliError> {
        let mut s = Settings::new();
        self.model.push_into(&mut s);
        push(&mut s, "kind", &self.kind);
        push(&mut s, "bracket", &self.bracket);
        push(&mut s, "which", &self.which);
        push(&mut s, "tol", &self.tol);
        push(&mut s, "eps_zero", &self.eps_zero);
        push(&mut s, "points", &self.points);
        push_path(&mut s, "scan_out", &self.scan_out);
        layered(&self.model.config, s)
    }
}

impl ValidateArgs {
    pub fn settings(&self) -> Result<Settings, CliError> {
        let mut s = Settings::new();
        push(&mut s, "seed", &self.seed);
        push(&mut s, "draws", &self.draws);
        if self.self_test {
            s.push("self_test", "true", "--self-test");
        }
        layered(&self.config, s)
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let env_threads = std::env::var(THREADS_ENV).ok();
    let outcome = match &cli.command {
        Command::Sweep(a) => a
            .settings()
            .and_then(|s| RunConfig::from_settings(&s, env_threads.as_deref()))
            .and_then(|c| commands::sweep(&c)),
        Command::Critical(a) => a
            .settings()
            .and_then(|s| CriticalConfig::from_settings(&s))
            .and_then(|c| commands::critical(&c)),
        Command::Validate(a) => a
            .settings()
            .and_then(|s| config::validate_options(&s))
            .and_then(|o| commands::validate(&o)),
    };
    match outcome {
        Ok(code) => code.code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit.code()
        }
    }
}
