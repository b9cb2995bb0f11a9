//! `magnomech`: steady-state entanglement of a driven magnon–photon–phonon
//! system from the command line.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "magnomech", version, about = "Cavity magnomechanics steady-state simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override a config key; dotted keys reach nested objects. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Worker threads for sweeps (default: MAGNOMECH_WORKERS, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Temperature in K.
    #[arg(long, global = true)]
    temperature: Option<f64>,
    /// Cavity detuning Δ_a/2π in Hz.
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta_a_hz: Option<f64>,
    /// Effective magnon detuning Δ̃_m/2π in Hz.
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta_m_eff_hz: Option<f64>,
    /// Effective magnomechanical coupling G_mb/2π in Hz (direct mode).
    #[arg(long, global = true)]
    g_mb_eff_hz: Option<f64>,
    /// Drive field B₀ in T; selects the physical coupling mode.
    #[arg(long, global = true)]
    b0: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print derived quantities: drive, ⟨m⟩, G_mb, thermal occupations.
    Derive {
        /// Print `quantity,value` CSV instead of aligned text.
        #[arg(long)]
        csv: bool,
    },
    /// Drift-matrix spectrum and stability verdict.
    Stability,
    /// Steady-state bipartite and tripartite entanglement.
    Entangle,
    /// Run the sweep described by the `sweep` config section.
    Sweep {
        /// Output directory for `<name>.csv` and `<name>.meta.json`;
        /// without it the CSV is printed.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Regenerate a figure panel as CSV plus metadata.
    Reproduce {
        /// fig2a, fig2b, fig2c, fig2d, fig3a, fig3a_inset, fig3b, fig4a, fig4b.
        #[arg(long)]
        figure: String,
        /// Grid points per axis.
        #[arg(long)]
        points: Option<usize>,
        /// Output directory (default: current directory).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Low-excitation and Kerr checks of the physical drive.
    Validate,
}

impl Common {
    fn overrides(&self) -> Result<Vec<(String, Value)>, CliError> {
        let mut out = self
            .set
            .iter()
            .map(|s| config::parse_override(s))
            .collect::<Result<Vec<_>, _>>()?;
        let num = |k: &str, v: Option<f64>| v.map(|v| (k.to_string(), Value::from(v)));
        out.extend(num("temperature", self.temperature));
        out.extend(num("delta_a_hz", self.delta_a_hz));
        out.extend(num("delta_m_eff_hz", self.delta_m_eff_hz));
        out.extend(num("g_mb_eff_hz", self.g_mb_eff_hz));
        if let Some(b0) = self.b0 {
            out.push(("coupling_mode".into(), Value::from("physical")));
            out.push(("b0".into(), Value::from(b0)));
        }
        Ok(out)
    }

    fn resolve(&self) -> Result<RunConfig, CliError> {
        config::load(self.config.as_deref(), &self.overrides()?)?.resolve(self.workers)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.common.resolve()?;
    let (out, verdict) = match &cli.command {
        Command::Derive { csv } => (commands::derive_cmd(&cfg, *csv)?, Ok(())),
        Command::Stability => commands::stability_cmd(&cfg),
        Command::Entangle => (commands::entangle_cmd(&cfg)?, Ok(())),
        Command::Sweep { out } => (commands::sweep_cmd(&cfg, out.as_deref())?, Ok(())),
        Command::Reproduce { figure, points, out } => (
            commands::reproduce_cmd(&cfg, figure, *points, out.as_deref())?,
            Ok(()),
        ),
        Command::Validate => commands::validate_cmd(&cfg),
    };
    print!("{out}");
    verdict
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("magnomech: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
