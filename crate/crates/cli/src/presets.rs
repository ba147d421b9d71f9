// SPDX-License-Identifier: Apache-2.0

//! Named figure presets.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_6};
use std::fmt;
use std::str::FromStr;

use exciton_chain::SweepAxis;
use num_complex::Complex64;

use crate::config::{Mode, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig2,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig4,
    Fig5a,
    Fig5b,
    Fig5c,
    Fig5d,
}

impl FigureId {
    pub const ALL: [FigureId; 13] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig1c,
        FigureId::Fig2,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig3c,
        FigureId::Fig3d,
        FigureId::Fig4,
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig5c,
        FigureId::Fig5d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig1c => "fig1c",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig3c => "fig3c",
            FigureId::Fig3d => "fig3d",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5a => "fig5a",
            FigureId::Fig5b => "fig5b",
            FigureId::Fig5c => "fig5c",
            FigureId::Fig5d => "fig5d",
        }
    }

    /// Trajectory figures compare one motional run against its static
    /// counterpart; everything else is a parameter sweep.
    pub fn is_sweep(self) -> bool {
        !matches!(self, FigureId::Fig1a | FigureId::Fig1b | FigureId::Fig1c)
    }

    /// Resolved configuration for this figure.
    pub fn config(self) -> RunConfig {
        let mut c = RunConfig {
            mode: Mode::Reproduce,
            figure: Some(self),
            ..RunConfig::default()
        };
        let set_phi = |c: &mut RunConfig, phi: f64| c.phi = vec![phi];
        match self {
            FigureId::Fig1a => c.omega = 1.0,
            FigureId::Fig1b => c.omega = 2.0,
            FigureId::Fig1c => {
                c.omega = 5.0;
                c.a1 = vec![1.0 / 3.0];
            }
            FigureId::Fig2 => {}
            FigureId::Fig3a => set_phi(&mut c, FRAC_PI_6),
            FigureId::Fig3b => set_phi(&mut c, FRAC_PI_3),
            FigureId::Fig3c => set_phi(&mut c, 2.0 * FRAC_PI_3),
            FigureId::Fig3d => set_phi(&mut c, 5.0 * FRAC_PI_6),
            FigureId::Fig4 => {
                c.axis = SweepAxis::Amplitude;
                c.omega = 1.0;
                c.grid_stop = 0.45;
                c.grid_step = 0.01;
            }
            FigureId::Fig5a | FigureId::Fig5b => {
                c.initial_state = vec![Complex64::new(FRAC_1_SQRT_2, 0.0); 2];
                set_phi(
                    &mut c,
                    if self == FigureId::Fig5a {
                        FRAC_PI_6
                    } else {
                        5.0 * FRAC_PI_6
                    },
                );
            }
            FigureId::Fig5c | FigureId::Fig5d => {
                c.initial_state = vec![
                    Complex64::new((1.0f64 / 3.0).sqrt(), 0.0),
                    Complex64::new((2.0f64 / 3.0).sqrt(), 0.0),
                ];
                set_phi(
                    &mut c,
                    if self == FigureId::Fig5c {
                        FRAC_PI_6
                    } else {
                        5.0 * FRAC_PI_6
                    },
                );
            }
        }
        c
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let known: Vec<_> = FigureId::ALL.iter().map(|f| f.name()).collect();
            format!("unknown figure `{s}` (expected one of {})", known.join(", "))
        })
    }
}
