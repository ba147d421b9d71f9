// SPDX-License-Identifier: Apache-2.0

//! CSV and plot-script writers.
//!
//! Files start with the resolved configuration as `# key = value` comment
//! lines, followed by a header row and numbers at 12 significant digits.
//! Output depends only on the configuration and the computed values, so
//! identical runs produce byte-identical files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::RunConfig;

#[derive(Debug, Error)]
#[error("{}: {source}", path.display())]
pub struct OutputError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

/// Row-major numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// Formats `x` like C's `%.12g`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV text for `table`, preceded by the echoed configuration.
pub fn render_csv(config: &RunConfig, table: &Table) -> String {
    let mut out = String::new();
    for line in config.to_config_text().lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Recovers the configuration text from the comment block of a CSV file.
pub fn metadata_text(csv: &str) -> String {
    csv.lines()
        .map_while(|l| l.strip_prefix("# "))
        .map(|l| format!("{l}\n"))
        .collect()
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), OutputError> {
    fs::write(path, contents).map_err(|source| OutputError {
        path: path.to_path_buf(),
        source,
    })
}

/// Path of the plot script written next to `csv_path`.
pub fn plot_script_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("py")
}

/// Standalone matplotlib script that plots `csv_name` (resolved relative to
/// the script's own directory).
pub fn plot_script(table: &Table, csv_name: &str) -> String {
    let x = &table.columns[0];
    let series: Vec<&String> = table.columns[1..].iter().collect();
    let (c_cols, p_cols): (Vec<&String>, Vec<&String>) = series.into_iter().partition(|c| c.starts_with("C"));
    let quote = |cols: &[&String]| cols.iter().map(|c| format!("\"{c}\"")).collect::<Vec<_>>().join(", ");
    let panels = if p_cols.is_empty() { 1 } else { 2 };
    format!(
        r##"#!/usr/bin/env python3
import csv
import os

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "{csv_name}")) as f:
    rows = [line for line in f if not line.startswith("#")]
data = list(csv.DictReader(rows))
x = [float(r["{x}"]) for r in data]

fig, axes = plt.subplots({panels}, 1, sharex=True, squeeze=False)
for ax, cols, label in zip(axes[:, 0], [[{c}], [{p}]], ["concurrence", "sink population"]):
    for col in cols:
        style = "r-" if col.endswith("motion") else "b--"
        ax.plot(x, [float(r[col]) for r in data], style, label=col)
    ax.set_ylabel(label)
    ax.legend()
axes[-1, 0].set_xlabel("{x}")
fig.tight_layout()
fig.savefig(os.path.join(here, "{stem}.png"), dpi=150)
"##,
        c = quote(&c_cols),
        p = quote(&p_cols),
        stem = Path::new(csv_name)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("plot"),
    )
}
