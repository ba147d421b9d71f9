// SPDX-License-Identifier: Apache-2.0

//! Runs a resolved configuration and writes its outputs.

use std::io::Write;
use std::path::PathBuf;

use exciton_chain::observables::{time_average, ObservableSeries};
use exciton_chain::{evolve, run_sweep, static_counterpart, Model, SweepResult, Trajectory};
use thiserror::Error;

use crate::config::{ConfigError, Mode, OutputOptions, RunConfig};
use crate::output::{self, OutputError, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Simulation(#[from] exciton_chain::Error),
    #[error("I/O error: {0}")]
    Io(#[from] OutputError),
}

impl CliError {
    /// Process exit status: 1 configuration/usage, 2 numerical failure,
    /// 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 1,
            CliError::Simulation(e) if e.is_numerical() => 2,
            CliError::Simulation(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}

/// Computed table plus a short human-readable summary.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    pub summary: Vec<String>,
}

/// Files written by [`execute`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Written {
    pub csv: Option<PathBuf>,
    pub plot_script: Option<PathBuf>,
}

pub fn compute(config: &RunConfig, jobs: Option<usize>) -> Result<RunOutput, exciton_chain::Error> {
    match (config.mode, config.figure) {
        (Mode::Reproduce, Some(f)) if !f.is_sweep() => compare_trajectories(config),
        (Mode::Reproduce, _) | (Mode::Sweep, _) => sweep(config, jobs),
        (Mode::Evolve, _) => single_trajectory(config),
    }
}

fn trajectory(config: &RunConfig, model: &Model<f64>) -> exciton_chain::Result<Trajectory<f64>> {
    let rho0 = config.initial_density(config.n_sites)?;
    evolve(&rho0, model, config.t_final, &config.integrator())
}

fn single_trajectory(config: &RunConfig) -> exciton_chain::Result<RunOutput> {
    let model = config.model()?;
    let traj = trajectory(config, &model)?;
    let n = config.n_sites;
    let mut columns = vec!["t".to_string()];
    let conc = if n == 2 {
        columns.push("C".into());
        Some(ObservableSeries::concurrence(&traj)?)
    } else {
        None
    };
    columns.push("p_sink".into());
    columns.push("pop_ground".into());
    columns.extend((1..=n).map(|k| format!("pop_site{k}")));
    let mut table = Table {
        columns,
        rows: Vec::with_capacity(traj.len()),
    };
    for (i, (t, state)) in traj.iter().enumerate() {
        let mut row = vec![t];
        if let Some(c) = &conc {
            row.push(c.values[i]);
        }
        row.push(state.population(n + 1));
        row.extend((0..=n).map(|k| state.population(k)));
        table.push(row);
    }
    let sink = ObservableSeries::sink_population(&traj)?;
    let mut summary = vec![format!("p_avg = {:.6}", time_average(&sink)?)];
    if let Some(c) = &conc {
        summary.insert(0, format!("C_avg = {:.6}", time_average(c)?));
    }
    Ok(RunOutput { table, summary })
}

fn compare_trajectories(config: &RunConfig) -> exciton_chain::Result<RunOutput> {
    let motional = config.model()?;
    let j_max = static_counterpart(config.j0, config.a1[0])?;
    let frozen = Model::new(config.chain(), config.motion_params().to_static(j_max))?;
    let c_motion = ObservableSeries::concurrence(&trajectory(config, &motional)?)?;
    let c_static = ObservableSeries::concurrence(&trajectory(config, &frozen)?)?;
    let mut table = Table::new(&["t", "C_motion", "C_static"]);
    for ((t, m), s) in c_motion.times.iter().zip(&c_motion.values).zip(&c_static.values) {
        table.push(vec![*t, *m, *s]);
    }
    let summary = vec![
        format!("C_avg_motion = {:.6}", time_average(&c_motion)?),
        format!("C_avg_static = {:.6} (J = {j_max})", time_average(&c_static)?),
    ];
    Ok(RunOutput { table, summary })
}

fn sweep(config: &RunConfig, jobs: Option<usize>) -> exciton_chain::Result<RunOutput> {
    let spec = config.sweep_spec()?;
    let result = run_sweep(&spec, jobs)?;
    Ok(RunOutput {
        table: sweep_table(&result),
        summary: sweep_summary(&result),
    })
}

pub fn sweep_table(result: &SweepResult<f64>) -> Table {
    let axis = result.spec.axis.name();
    let mut table = Table::new(&[axis, "C_avg_motion", "C_avg_static", "p_avg_motion", "p_avg_static"]);
    for r in &result.rows {
        table.push(vec![r.axis_value, r.c_motion, r.c_static, r.p_motion, r.p_static]);
    }
    table
}

fn sweep_summary(result: &SweepResult<f64>) -> Vec<String> {
    let axis = result.spec.axis.name();
    let mut summary = vec![format!(
        "motion enhances C_avg at {:.1}% of {} points",
        100.0 * result.enhanced_fraction(),
        result.rows.len()
    )];
    if let Some(best) = result.argmax_motion() {
        summary.push(format!(
            "max C_avg_motion = {:.6} at {axis} = {}",
            best.c_motion, best.axis_value
        ));
    }
    if let Some(r) = result.tradeoff_correlation() {
        summary.push(format!("corr(dC, dp) = {r:.4}"));
    }
    summary
}

/// Computes `config` and writes the CSV to `options.output_path` (stdout
/// when unset) plus, if requested, a plot script beside it.
pub fn execute(config: &RunConfig, options: &OutputOptions) -> Result<(RunOutput, Written), CliError> {
    if config.emit_plot_script && options.output_path.is_none() {
        return Err(CliError::Usage("plot scripts need an output path (--out)".into()));
    }
    let run = compute(config, options.jobs)?;
    let csv = output::render_csv(config, &run.table);
    let mut written = Written::default();
    match &options.output_path {
        Some(path) => {
            output::write_file(path, &csv)?;
            written.csv = Some(path.clone());
            if config.emit_plot_script {
                let script_path = output::plot_script_path(path);
                let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("data.csv");
                output::write_file(&script_path, &output::plot_script(&run.table, name))?;
                written.plot_script = Some(script_path);
            }
        }
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(csv.as_bytes()).map_err(|source| OutputError {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
        }
    }
    Ok((run, written))
}
