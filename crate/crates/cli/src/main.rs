//! `qslcv`: trajectories, bound states, speed-limit ratios and figure sweeps
//! as CSV.

mod commands;
mod config;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::{Defaults, Flags, RunConfig, Step, Sweep};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<qslcv::Error> for CliError {
    fn from(e: qslcv::Error) -> Self {
        match e {
            qslcv::Error::Domain(m) => CliError::Usage(m),
            qslcv::Error::Numeric(m) => CliError::Numeric(m),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qslcv",
    version,
    about = "Quantum speed limits of a damped oscillator in a coherent state"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Amplitude u(t), its derivative and the master-equation coefficients.
    Evolve(Flags),
    /// Bound-state energy and residue.
    Boundstate(Flags),
    /// Speed-limit report at τ, or at each point of --tau-sweep.
    Qsl(Flags),
    /// Average speed and QSL ratio over an (η, τ) grid.
    Fig1(Flags),
    /// v̄ at τ against η and against ω_c, with the bound-state prediction.
    Fig2(Flags),
    /// 100·τ_QSL/τ and its Wasserstein counterpart against τ.
    Fig3(Flags),
    /// Critical coupling by bisection against 1/(ω_c Γ(s)).
    Threshold(Flags),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let fixed = Some(Step::Fixed(0.01));
    match cli.command {
        Command::Evolve(f) => {
            commands::evolve(&RunConfig::resolve("evolve", &f, Defaults::default())?)
        }
        Command::Boundstate(f) => {
            commands::boundstate(&RunConfig::resolve("boundstate", &f, Defaults::default())?)
        }
        Command::Qsl(f) => commands::qsl(&RunConfig::resolve("qsl", &f, Defaults::default())?),
        Command::Fig1(f) => commands::fig1(&RunConfig::resolve(
            "fig1",
            &f,
            Defaults {
                step: fixed,
                eta_sweep: Some(Sweep::geometric(0.02, 0.2, 10)),
                tau_sweep: Some(Sweep::linear(4.0, 400.0, 100)),
                ..Defaults::default()
            },
        )?),
        Command::Fig2(f) => commands::fig2(&RunConfig::resolve(
            "fig2",
            &f,
            Defaults {
                step: fixed,
                eta_sweep: Some(Sweep::linear(0.02, 0.2, 37)),
                omega_c_sweep: Some(Sweep::linear(2.0, 20.0, 19)),
                ..Defaults::default()
            },
        )?),
        Command::Fig3(f) => commands::fig3(&RunConfig::resolve(
            "fig3",
            &f,
            Defaults {
                step: fixed,
                tau_sweep: Some(Sweep::linear(2.0, 400.0, 200)),
                ..Defaults::default()
            },
        )?),
        Command::Threshold(f) => commands::threshold(&RunConfig::resolve(
            "threshold",
            &f,
            Defaults {
                s_sweep: Some(Sweep::linear(0.5, 3.0, 6)),
                omega_c_sweep: Some(Sweep::linear(5.0, 20.0, 4)),
                scalar_overrides_sweep: true,
                ..Defaults::default()
            },
        )?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed pipe (`qslcv … | head`) is not a failure.
        Err(CliError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qslcv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
