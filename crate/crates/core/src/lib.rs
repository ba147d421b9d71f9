// SPDX-License-Identifier: Apache-2.0

//! Excitation transfer through a chain of molecules whose dipole coupling
//! is modulated by classical oscillation of the inter-molecular distance.
//!
//! The crate integrates the Lindblad master equation of the chain (with
//! site dissipation, an absorbing sink and optional dephasing), evaluates
//! the Wootters concurrence of molecules 1 and 2 and the sink population,
//! and runs paired motional/static parameter sweeps.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below fix the scalar to `f64`.
//!
//! ```
//! use exciton_chain::{evolve, ChainParams, DensityMatrix, IntegratorConfig, Model, MotionParams};
//! use exciton_chain::observables::{time_average, ObservableSeries};
//!
//! let chain = ChainParams::uniform(2, 1.0, 0.2, 0.5);
//! let motion = MotionParams::oscillating(2, 0.25, 1.0, std::f64::consts::FRAC_PI_2);
//! let model = Model::new(chain, motion).unwrap();
//! let traj = evolve(&DensityMatrix::site(2, 1).unwrap(), &model, 1.0, &IntegratorConfig::default()).unwrap();
//! let c = time_average(&ObservableSeries::concurrence(&traj).unwrap()).unwrap();
//! assert!(c > 0.0 && c < 1.0);
//! ```

// `!(x <= tol)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod scalar;
pub mod sweeps;

pub use dynamics::{convergence_check, evolve, propagate, IntegratorConfig, Trajectory};
pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use model::{coupling_strength, ChainParams, DensityMatrix, DissipationConvention, Model, MotionParams};
pub use observables::{
    concurrence, concurrence_fast, reduce_to_two_qubits, sink_population, time_average, ObservableSeries, TwoQubitState,
};
pub use scalar::{Cplx, Real};
pub use sweeps::{run_point, run_sweep, static_counterpart, InitialState, SweepAxis, SweepResult, SweepRow, SweepSpec};

pub type ChainParamsF64 = ChainParams<f64>;
pub type MotionParamsF64 = MotionParams<f64>;
pub type ModelF64 = Model<f64>;
pub type DensityMatrixF64 = DensityMatrix<f64>;
pub type IntegratorConfigF64 = IntegratorConfig<f64>;
pub type TrajectoryF64 = Trajectory<f64>;
pub type SweepSpecF64 = SweepSpec<f64>;
pub type SweepResultF64 = SweepResult<f64>;

pub type ChainParamsF32 = ChainParams<f32>;
pub type MotionParamsF32 = MotionParams<f32>;
pub type ModelF32 = Model<f32>;
pub type DensityMatrixF32 = DensityMatrix<f32>;
