// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for `exciton-chain`.
//!
//! Resolves layered `key = value` configurations, runs single evolutions,
//! parameter sweeps or named figure presets, and writes CSV tables with the
//! resolved configuration echoed in a leading comment block.

// `!(x <= tol)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

pub use commands::{compute, execute, CliError, RunOutput};
pub use config::{parse_config, resolve, ConfigError, Mode, OutputOptions, RunConfig};
pub use output::{render_csv, Table};
pub use presets::FigureId;
