// SPDX-License-Identifier: Apache-2.0

//! Argument parsing and dispatch for the `exciton-chain` binary.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{execute, CliError};
use crate::config::{parse_override, resolve, Mode, RunConfig};
use crate::output::OutputError;
use crate::presets::FigureId;

#[derive(Debug, Parser)]
#[command(name = "exciton-chain", version, about = "Driven-coupling exciton chain simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Configuration file with `key = value` lines
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output CSV path (stdout when omitted)
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps (default: available parallelism)
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    /// Also write a matplotlib script next to the CSV
    #[arg(long, global = true)]
    pub plot: bool,

    /// Override a configuration key; may be repeated
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    /// Suppress the summary on stderr
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one trajectory
    Evolve,
    /// Sweep one parameter, comparing motional and static coupling
    Sweep,
    /// Run a named figure preset
    Reproduce {
        #[arg(value_name = "FIGURE_ID")]
        figure: FigureId,
    },
}

/// Builds the configuration layers for `cli`: preset or defaults, then the
/// config file, then `--set`, then dedicated flags.
pub fn resolve_cli(cli: &Cli) -> Result<(RunConfig, crate::config::OutputOptions), CliError> {
    let (base, mode) = match &cli.command {
        Command::Evolve => (RunConfig::default(), Mode::Evolve),
        Command::Sweep => (RunConfig::default(), Mode::Sweep),
        Command::Reproduce { figure } => (figure.config(), Mode::Reproduce),
    };
    let file = match &cli.config {
        Some(path) => Some(fs::read_to_string(path).map_err(|source| OutputError {
            path: path.clone(),
            source,
        })?),
        None => None,
    };
    let source = cli.config.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
    let texts: Vec<(&str, &str)> = file.as_deref().map(|t| (source.as_str(), t)).into_iter().collect();

    let mut overrides = cli
        .set
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>, _>>()?;
    overrides.push(("mode".into(), mode.name().into()));
    if let Command::Reproduce { figure } = &cli.command {
        overrides.push(("figure".into(), figure.name().into()));
    }
    if let Some(out) = &cli.out {
        overrides.push(("out".into(), out.display().to_string()));
    }
    if let Some(jobs) = cli.jobs {
        overrides.push(("jobs".into(), jobs.to_string()));
    }
    if cli.plot {
        overrides.push(("plot".into(), "true".into()));
    }
    Ok(resolve(base, &texts, &overrides)?)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = resolve_cli(&cli).and_then(|(config, options)| execute(&config, &options));
    match result {
        Ok((run, written)) => {
            if !cli.quiet {
                for line in &run.summary {
                    eprintln!("{line}");
                }
                for path in written.csv.iter().chain(&written.plot_script) {
                    eprintln!("wrote {}", path.display());
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
