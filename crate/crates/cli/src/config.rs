// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` run configuration.
//!
//! A configuration is resolved in layers: built-in defaults (or a figure
//! preset), then a config file, then `--set key=value` overrides. Every key
//! is validated against the invariants of the type that owns it before any
//! computation starts. [`RunConfig::to_config_text`] echoes the resolved
//! configuration in the same syntax, and parsing that text reproduces the
//! identical [`RunConfig`].

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use exciton_chain::sweeps::uniform_grid;
use exciton_chain::{
    ChainParams, DissipationConvention, InitialState, IntegratorConfig, Model, MotionParams, SweepAxis, SweepSpec,
};
use num_complex::Complex64;
use thiserror::Error;

use crate::presets::FigureId;

/// Where a configuration entry came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line { source: String, line: usize },
    Flag,
    Default,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line { source, line } => write!(f, "{source}:{line}"),
            Origin::Flag => f.write_str("command line"),
            Origin::Default => f.write_str("defaults"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{origin}: `{key}`: {message}")]
pub struct ConfigError {
    pub origin: Origin,
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(origin: Origin, key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            origin,
            key: key.into(),
            message: message.into(),
        }
    }

    /// Line number, when the entry came from a file.
    pub fn line(&self) -> Option<usize> {
        match self.origin {
            Origin::Line { line, .. } => Some(line),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Evolve,
    Sweep,
    Reproduce,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Evolve => "evolve",
            Mode::Sweep => "sweep",
            Mode::Reproduce => "reproduce",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "evolve" => Ok(Mode::Evolve),
            "sweep" => Ok(Mode::Sweep),
            "reproduce" => Ok(Mode::Reproduce),
            _ => Err(format!("unknown mode `{s}` (expected evolve, sweep or reproduce)")),
        }
    }
}

/// Fully resolved simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub figure: Option<FigureId>,

    pub n_sites: usize,
    pub epsilon: Vec<f64>,
    pub j0: f64,
    pub gamma: Vec<f64>,
    pub gamma_s: f64,
    pub gamma_deph: Vec<f64>,
    pub dissipation: DissipationConvention,

    pub motion: bool,
    pub a1: Vec<f64>,
    pub omega: f64,
    pub phi: Vec<f64>,
    pub static_coupling: Option<f64>,

    pub t_final: f64,
    pub dt: f64,
    pub output_stride: usize,
    pub hermitize: bool,
    pub positivity_tolerance: f64,
    pub max_coupling_phase: Option<f64>,
    pub initial_state: Vec<Complex64>,

    pub axis: SweepAxis,
    pub grid_start: f64,
    pub grid_stop: f64,
    pub grid_step: f64,

    pub emit_plot_script: bool,
}

/// Invocation settings that do not influence any computed number and are
/// therefore not echoed into output files.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OutputOptions {
    pub output_path: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Evolve,
            figure: None,
            n_sites: 2,
            epsilon: vec![0.0],
            j0: 1.0,
            gamma: vec![0.2],
            gamma_s: 0.5,
            gamma_deph: vec![0.0],
            dissipation: DissipationConvention::Standard,
            motion: true,
            a1: vec![0.25],
            omega: 1.0,
            phi: vec![std::f64::consts::FRAC_PI_2],
            static_coupling: None,
            t_final: 8.0,
            dt: 1e-3,
            output_stride: 10,
            hermitize: true,
            positivity_tolerance: 1e-8,
            max_coupling_phase: Some(0.004),
            initial_state: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            axis: SweepAxis::Omega,
            grid_start: 0.0,
            grid_stop: 10.0,
            grid_step: 0.05,
            emit_plot_script: false,
        }
    }
}

/// All recognised keys, in echo order.
pub const KEYS: &[&str] = &[
    "mode",
    "figure",
    "n_sites",
    "epsilon",
    "j0",
    "gamma",
    "gamma_s",
    "gamma_deph",
    "dissipation",
    "motion",
    "a1",
    "omega",
    "phi",
    "static_coupling",
    "t_final",
    "dt",
    "output_stride",
    "hermitize",
    "positivity_tolerance",
    "max_coupling_phase",
    "initial_state",
    "axis",
    "grid_start",
    "grid_stop",
    "grid_step",
    "plot",
];

/// Keys accepted in addition to [`KEYS`] but never echoed.
const OUTPUT_KEYS: &[&str] = &["out", "jobs"];

/// Splits `text` into `(line number, key, value)` entries.
pub fn tokenize(text: &str, source: &str) -> Result<Vec<(Origin, String, String)>, ConfigError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let origin = Origin::Line {
            source: source.to_string(),
            line: idx + 1,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::new(origin, line, "expected `key = value`"));
        };
        entries.push((origin, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

/// Splits a `key=value` command-line override.
pub fn parse_override(arg: &str) -> Result<(String, String), ConfigError> {
    match arg.split_once('=') {
        Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
        None => Err(ConfigError::new(Origin::Flag, arg, "expected `key=value`")),
    }
}

/// Resolves `file_text` and `overrides` on top of the defaults.
pub fn parse_config(
    file_text: &str,
    overrides: &[(String, String)],
) -> Result<(RunConfig, OutputOptions), ConfigError> {
    resolve(RunConfig::default(), &[("config", file_text)], overrides)
}

/// Applies config texts (in order) and then flag overrides onto `base`, and
/// validates the result.
pub fn resolve(
    base: RunConfig,
    texts: &[(&str, &str)],
    overrides: &[(String, String)],
) -> Result<(RunConfig, OutputOptions), ConfigError> {
    let mut builder = Builder::new(base);
    for (source, text) in texts {
        for (origin, key, value) in tokenize(text, source)? {
            builder.set(origin, &key, &value)?;
        }
    }
    for (key, value) in overrides {
        builder.set(Origin::Flag, key, value)?;
    }
    builder.finish()
}

fn parse_f64(origin: &Origin, key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError::new(origin.clone(), key, format!("`{value}` is not a finite number")))
}

fn parse_list(origin: &Origin, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value.split(',').map(|v| parse_f64(origin, key, v.trim())).collect()
}

fn parse_bool(origin: &Origin, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(ConfigError::new(
            origin.clone(),
            key,
            format!("`{value}` is not a boolean"),
        )),
    }
}

fn parse_usize(origin: &Origin, key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse::<usize>()
        .map_err(|_| ConfigError::new(origin.clone(), key, format!("`{value}` is not a nonnegative integer")))
}

struct Builder {
    config: RunConfig,
    output: OutputOptions,
    origins: HashMap<&'static str, Origin>,
}

impl Builder {
    fn new(config: RunConfig) -> Self {
        Self {
            config,
            output: OutputOptions::default(),
            origins: HashMap::new(),
        }
    }

    fn set(&mut self, origin: Origin, key: &str, value: &str) -> Result<(), ConfigError> {
        let Some(&canonical) = KEYS.iter().chain(OUTPUT_KEYS).find(|k| **k == key) else {
            return Err(ConfigError::new(origin, key, "unknown key"));
        };
        let c = &mut self.config;
        let o = &origin;
        match canonical {
            "mode" => c.mode = value.parse().map_err(|e: String| ConfigError::new(o.clone(), key, e))?,
            "figure" => {
                c.figure = if value == "none" {
                    None
                } else {
                    Some(value.parse().map_err(|e: String| ConfigError::new(o.clone(), key, e))?)
                }
            }
            "n_sites" => c.n_sites = parse_usize(o, key, value)?,
            "epsilon" => c.epsilon = parse_list(o, key, value)?,
            "j0" => c.j0 = parse_f64(o, key, value)?,
            "gamma" => c.gamma = parse_list(o, key, value)?,
            "gamma_s" => c.gamma_s = parse_f64(o, key, value)?,
            "gamma_deph" => c.gamma_deph = parse_list(o, key, value)?,
            "dissipation" => {
                c.dissipation = DissipationConvention::from_name(value).ok_or_else(|| {
                    ConfigError::new(o.clone(), key, format!("`{value}` is not one of standard, doubled"))
                })?
            }
            "motion" => c.motion = parse_bool(o, key, value)?,
            "a1" => c.a1 = parse_list(o, key, value)?,
            "omega" => c.omega = parse_f64(o, key, value)?,
            "phi" => c.phi = parse_list(o, key, value)?,
            "static_coupling" => {
                c.static_coupling = if value == "none" {
                    None
                } else {
                    Some(parse_f64(o, key, value)?)
                }
            }
            "t_final" => c.t_final = parse_f64(o, key, value)?,
            "dt" => c.dt = parse_f64(o, key, value)?,
            "output_stride" => c.output_stride = parse_usize(o, key, value)?,
            "hermitize" => c.hermitize = parse_bool(o, key, value)?,
            "positivity_tolerance" => c.positivity_tolerance = parse_f64(o, key, value)?,
            "max_coupling_phase" => {
                c.max_coupling_phase = if value == "none" {
                    None
                } else {
                    Some(parse_f64(o, key, value)?)
                }
            }
            "initial_state" => {
                c.initial_state = value
                    .split(',')
                    .map(|v| {
                        Complex64::from_str(v.trim()).map_err(|_| {
                            ConfigError::new(o.clone(), key, format!("`{}` is not a complex amplitude", v.trim()))
                        })
                    })
                    .collect::<Result<_, _>>()?
            }
            "axis" => {
                c.axis = SweepAxis::from_name(value).ok_or_else(|| {
                    ConfigError::new(o.clone(), key, format!("`{value}` is not one of omega, phi, a1"))
                })?
            }
            "grid_start" => c.grid_start = parse_f64(o, key, value)?,
            "grid_stop" => c.grid_stop = parse_f64(o, key, value)?,
            "grid_step" => c.grid_step = parse_f64(o, key, value)?,
            "plot" => c.emit_plot_script = parse_bool(o, key, value)?,
            "out" => self.output.output_path = Some(PathBuf::from(value)),
            "jobs" => {
                let n = parse_usize(o, key, value)?;
                if n == 0 {
                    return Err(ConfigError::new(origin, key, "worker count must be at least 1"));
                }
                self.output.jobs = Some(n);
            }
            _ => unreachable!("key table and match arms out of sync"),
        }
        self.origins.insert(canonical, origin);
        Ok(())
    }

    fn origin(&self, key: &str) -> Origin {
        self.origins.get(key).cloned().unwrap_or(Origin::Default)
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::new(self.origin(key), key, message)
    }

    /// Broadcasts single values to one per site / bond. Uniform values the
    /// user never set follow `n_sites`.
    fn broadcast(&self, key: &'static str, values: &mut Vec<f64>, len: usize) -> Result<(), ConfigError> {
        let inherited = !self.origins.contains_key(key) && values.windows(2).all(|w| w[0] == w[1]);
        if (values.len() == 1 || inherited) && !values.is_empty() {
            *values = vec![values[0]; len];
        }
        if values.len() != len {
            return Err(self.err(
                key,
                format!("expected {len} values (or one to broadcast), got {}", values.len()),
            ));
        }
        Ok(())
    }

    fn finish(mut self) -> Result<(RunConfig, OutputOptions), ConfigError> {
        let n = self.config.n_sites;
        if n < 2 {
            return Err(self.err("n_sites", "need at least 2 sites"));
        }
        let mut c = std::mem::take(&mut self.config.epsilon);
        self.broadcast("epsilon", &mut c, n)?;
        self.config.epsilon = c;
        let mut c = std::mem::take(&mut self.config.gamma);
        self.broadcast("gamma", &mut c, n)?;
        self.config.gamma = c;
        let mut c = std::mem::take(&mut self.config.gamma_deph);
        self.broadcast("gamma_deph", &mut c, n)?;
        self.config.gamma_deph = c;
        let mut c = std::mem::take(&mut self.config.a1);
        self.broadcast("a1", &mut c, n - 1)?;
        self.config.a1 = c;
        let mut c = std::mem::take(&mut self.config.phi);
        self.broadcast("phi", &mut c, n - 1)?;
        self.config.phi = c;

        self.validate()?;
        Ok((self.config, self.output))
    }

    /// Runs the library validators and maps their parameter names back to
    /// configuration keys.
    fn validate(&self) -> Result<(), ConfigError> {
        let c = &self.config;
        let lib = |e: exciton_chain::Error| -> ConfigError {
            let key = match &e {
                exciton_chain::Error::InvalidParameter { name, .. } => match *name {
                    "amplitude" | "amplitudes" => "a1",
                    "phases" => "phi",
                    "gamma_s" => "gamma_s",
                    "j0" => "j0",
                    "epsilon" => "epsilon",
                    "gamma" => "gamma",
                    "gamma_deph" => "gamma_deph",
                    "omega" => "omega",
                    "static_coupling" => "static_coupling",
                    "dt" => "dt",
                    "output_stride" => "output_stride",
                    "positivity_tolerance" => "positivity_tolerance",
                    "max_coupling_phase" => "max_coupling_phase",
                    "initial_state" | "site" => "initial_state",
                    "grid" => "grid_start",
                    "t_final" => "t_final",
                    "n_sites" => "n_sites",
                    other => other,
                },
                _ => "config",
            };
            let message = match e {
                exciton_chain::Error::InvalidParameter { reason, .. } => reason,
                other => other.to_string(),
            };
            self.err(key, message)
        };

        let model = c.model().map_err(lib)?;
        c.integrator().validate().map_err(lib)?;
        c.initial_density(model.chain().n_sites).map_err(lib)?;
        if !(c.t_final > 0.0) {
            return Err(self.err("t_final", "must be positive"));
        }
        let samples = c.t_final / (c.dt * c.output_stride as f64);
        if (samples - samples.round()).abs() > 1e-9 * samples.max(1.0) || samples.round() < 1.0 {
            return Err(self.err(
                "t_final",
                format!(
                    "must be a positive multiple of dt · output_stride = {}",
                    c.dt * c.output_stride as f64
                ),
            ));
        }
        let needs_sweep =
            matches!(c.mode, Mode::Sweep) || matches!(c.figure, Some(f) if f.is_sweep() && c.mode == Mode::Reproduce);
        if needs_sweep {
            c.sweep_spec().map_err(lib)?.validate().map_err(lib)?;
        }
        if c.mode == Mode::Reproduce && c.figure.is_none() {
            return Err(self.err("figure", "reproduce needs a figure id"));
        }
        if (c.mode == Mode::Reproduce || needs_sweep) && c.n_sites != 2 {
            return Err(self.err("n_sites", "figures and sweeps use the two-site chain"));
        }
        Ok(())
    }
}

fn fmt_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ")
}

impl RunConfig {
    pub fn chain(&self) -> ChainParams<f64> {
        ChainParams {
            n_sites: self.n_sites,
            epsilon: self.epsilon.clone(),
            j0: self.j0,
            gamma: self.gamma.clone(),
            gamma_sink: self.gamma_s,
            gamma_deph: self.gamma_deph.clone(),
            convention: self.dissipation,
        }
    }

    pub fn motion_params(&self) -> MotionParams<f64> {
        MotionParams {
            enabled: self.motion,
            amplitudes: self.a1.clone(),
            omega: self.omega,
            phases: self.phi.clone(),
            static_coupling: self.static_coupling,
        }
    }

    pub fn model(&self) -> exciton_chain::Result<Model<f64>> {
        Model::new(self.chain(), self.motion_params())
    }

    pub fn integrator(&self) -> IntegratorConfig<f64> {
        IntegratorConfig {
            dt: self.dt,
            output_stride: self.output_stride,
            hermitize: self.hermitize,
            positivity_tolerance: self.positivity_tolerance,
            max_coupling_phase: self.max_coupling_phase,
            ..IntegratorConfig::default()
        }
    }

    pub fn initial_density(&self, n_sites: usize) -> exciton_chain::Result<exciton_chain::DensityMatrix<f64>> {
        exciton_chain::DensityMatrix::from_site_amplitudes(n_sites, &self.initial_state)
    }

    pub fn grid(&self) -> exciton_chain::Result<Vec<f64>> {
        uniform_grid(self.grid_start, self.grid_stop, self.grid_step)
    }

    pub fn sweep_spec(&self) -> exciton_chain::Result<SweepSpec<f64>> {
        if self.initial_state.len() != 2 {
            return Err(exciton_chain::Error::InvalidParameter {
                name: "initial_state",
                reason: "sweeps take two amplitudes (sites 1 and 2)".into(),
            });
        }
        Ok(SweepSpec {
            axis: self.axis,
            grid: self.grid()?,
            chain: self.chain(),
            motion: self.motion_params(),
            initial_state: InitialState::new(self.initial_state[0], self.initial_state[1])?,
            horizon: self.t_final,
            integrator: self.integrator(),
        })
    }

    /// The resolved configuration as `key = value` lines, one per key in
    /// [`KEYS`] order. Floats use the shortest representation that parses
    /// back to the same value.
    pub fn to_config_text(&self) -> String {
        let figure = self
            .figure
            .map(|f| f.name().to_string())
            .unwrap_or_else(|| "none".into());
        let optional = |v: Option<f64>| v.map(|v| format!("{v:?}")).unwrap_or_else(|| "none".into());
        let initial = self
            .initial_state
            .iter()
            .map(|z| format!("{:?}{:+?}i", z.re, z.im))
            .collect::<Vec<_>>()
            .join(", ");
        let entries: Vec<(&str, String)> = vec![
            ("mode", self.mode.name().into()),
            ("figure", figure),
            ("n_sites", self.n_sites.to_string()),
            ("epsilon", fmt_list(&self.epsilon)),
            ("j0", format!("{:?}", self.j0)),
            ("gamma", fmt_list(&self.gamma)),
            ("gamma_s", format!("{:?}", self.gamma_s)),
            ("gamma_deph", fmt_list(&self.gamma_deph)),
            ("dissipation", self.dissipation.name().into()),
            ("motion", self.motion.to_string()),
            ("a1", fmt_list(&self.a1)),
            ("omega", format!("{:?}", self.omega)),
            ("phi", fmt_list(&self.phi)),
            ("static_coupling", optional(self.static_coupling)),
            ("t_final", format!("{:?}", self.t_final)),
            ("dt", format!("{:?}", self.dt)),
            ("output_stride", self.output_stride.to_string()),
            ("hermitize", self.hermitize.to_string()),
            ("positivity_tolerance", format!("{:?}", self.positivity_tolerance)),
            ("max_coupling_phase", optional(self.max_coupling_phase)),
            ("initial_state", initial),
            ("axis", self.axis.name().into()),
            ("grid_start", format!("{:?}", self.grid_start)),
            ("grid_stop", format!("{:?}", self.grid_stop)),
            ("grid_step", format!("{:?}", self.grid_step)),
            ("plot", self.emit_plot_script.to_string()),
        ];
        debug_assert_eq!(entries.len(), KEYS.len());
        entries.into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}
