// SPDX-License-Identifier: Apache-2.0

//! Fixed-step fourth-order Runge-Kutta propagation of the master equation.
//!
//! The Hamiltonian is evaluated at the stage times `t`, `t + dt/2` and
//! `t + dt` of every step. After each step the state is optionally
//! re-Hermitized; positivity and trace are checked at every output sample
//! and a violation is reported as [`Error::NumericalFailure`] rather than
//! repaired.
//!
//! A fixed step that resolves a slow drive can be far too coarse for a strong
//! coupling: a bond at `J = 1000` rotates a full radian per step at
//! `dt = 1e-3`. [`IntegratorConfig::max_coupling_phase`] caps `J_peak · dt`
//! by refining the step of a run (never the output grid) before it starts.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::{DensityMatrix, Model};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig<T> {
    /// Step size.
    pub dt: T,
    /// Number of steps between stored samples.
    pub output_stride: usize,
    /// Symmetrize `ρ ← (ρ + ρ†)/2` after every step.
    pub hermitize: bool,
    /// Allowed negativity of the smallest eigenvalue of a sample.
    pub positivity_tolerance: T,
    /// Allowed `|Tr ρ − 1|` of a sample.
    pub trace_tolerance: T,
    /// Upper bound on `J_peak · dt`; the step of a run is refined to an
    /// integer fraction of the output spacing until it holds. `None` uses
    /// `dt` as given.
    pub max_coupling_phase: Option<T>,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            dt: T::lit(1e-3),
            output_stride: 10,
            hermitize: true,
            positivity_tolerance: linalg::tolerance(1e-8),
            trace_tolerance: linalg::tolerance(1e-6),
            max_coupling_phase: Some(T::lit(0.004)),
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.output_stride = stride;
        self
    }

    pub fn with_coupling_phase(mut self, max_phase: Option<T>) -> Self {
        self.max_coupling_phase = max_phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > T::zero()) {
            return Err(Error::invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.output_stride == 0 {
            return Err(Error::invalid("output_stride", "must be at least 1"));
        }
        if !(self.positivity_tolerance >= T::zero()) {
            return Err(Error::invalid("positivity_tolerance", "must be nonnegative"));
        }
        if !(self.trace_tolerance >= T::zero()) {
            return Err(Error::invalid("trace_tolerance", "must be nonnegative"));
        }
        if let Some(theta) = self.max_coupling_phase {
            if !(theta.is_finite() && theta > T::zero()) {
                return Err(Error::invalid(
                    "max_coupling_phase",
                    format!("must be positive, got {theta}"),
                ));
            }
        }
        Ok(())
    }

    /// Spacing of the output grid, `dt · stride`.
    pub fn output_spacing(&self) -> T {
        self.dt * T::from_count(self.output_stride)
    }

    /// Step and steps-per-sample used for a model whose largest coupling is
    /// `peak_coupling`. Equals `(dt, output_stride)` unless that step would
    /// exceed [`Self::max_coupling_phase`].
    pub fn effective_step(&self, peak_coupling: T) -> (T, usize) {
        let Some(theta) = self.max_coupling_phase else {
            return (self.dt, self.output_stride);
        };
        if !(peak_coupling > T::zero()) || self.dt * peak_coupling <= theta {
            return (self.dt, self.output_stride);
        }
        let spacing = self.output_spacing();
        let per_sample = (spacing * peak_coupling / theta).ceil();
        match per_sample.to_usize() {
            Some(n) if n > self.output_stride => (spacing / T::from_count(n), n),
            _ => (self.dt, self.output_stride),
        }
    }
}

/// States sampled on the uniform grid `t_k = k · dt · stride`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<DensityMatrix<T>>,
    /// Integration step actually used.
    pub dt: T,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &DensityMatrix<T> {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, &DensityMatrix<T>)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// Number of steps of size `dt` that exactly cover `[0, t_final]`.
fn step_count<T: Real>(t_final: T, dt: T) -> Result<usize> {
    if !(t_final.is_finite() && t_final > T::zero()) {
        return Err(Error::invalid("t_final", format!("must be positive, got {t_final}")));
    }
    let ratio = t_final / dt;
    let steps = ratio.round();
    let mismatch = (ratio - steps).abs();
    if steps < T::one() || mismatch > linalg::tolerance::<T>(1e-9) * ratio.max(T::one()) {
        return Err(Error::invalid(
            "dt",
            format!("t_final = {t_final} is not an integer multiple of dt = {dt}"),
        ));
    }
    steps.to_usize().ok_or_else(|| Error::invalid("dt", "too many steps"))
}

/// Scratch buffers for one RK4 step.
struct Stepper<T: Real> {
    k1: CMatrix<T>,
    k2: CMatrix<T>,
    k3: CMatrix<T>,
    k4: CMatrix<T>,
    stage: CMatrix<T>,
}

impl<T: Real> Stepper<T> {
    fn new(dim: usize) -> Self {
        let z = || CMatrix::zeros(dim, dim);
        Self {
            k1: z(),
            k2: z(),
            k3: z(),
            k4: z(),
            stage: z(),
        }
    }

    fn step(&mut self, model: &Model<T>, t: T, dt: T, rho: &mut CMatrix<T>) {
        let half = dt * T::lit(0.5);

        model.rhs_into(t, rho, &mut self.k1);

        self.stage.copy_from(rho);
        add_scaled(&mut self.stage, &self.k1, half);
        model.rhs_into(t + half, &self.stage, &mut self.k2);

        self.stage.copy_from(rho);
        add_scaled(&mut self.stage, &self.k2, half);
        model.rhs_into(t + half, &self.stage, &mut self.k3);

        self.stage.copy_from(rho);
        add_scaled(&mut self.stage, &self.k3, dt);
        model.rhs_into(t + dt, &self.stage, &mut self.k4);

        let sixth = dt / T::lit(6.0);
        let third = dt / T::lit(3.0);
        add_scaled(rho, &self.k1, sixth);
        add_scaled(rho, &self.k2, third);
        add_scaled(rho, &self.k3, third);
        add_scaled(rho, &self.k4, sixth);
    }
}

/// `dst += a · src`
#[inline]
fn add_scaled<T: Real>(dst: &mut CMatrix<T>, src: &CMatrix<T>, a: T) {
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d += s.scale(a);
    }
}

fn check_sample<T: Real>(state: &DensityMatrix<T>, t: T, config: &IntegratorConfig<T>) -> Result<()> {
    let tr = state.trace();
    let drift = ((tr.re - T::one()) * (tr.re - T::one()) + tr.im * tr.im).sqrt();
    if !(drift <= config.trace_tolerance) {
        return Err(Error::numerical(
            t.to_f64_lossy(),
            format!("trace drifted to {} (|Δ| = {drift:e})", tr.re),
        ));
    }
    let min = state.min_eigenvalue();
    if !(min >= -config.positivity_tolerance) {
        return Err(Error::numerical(
            t.to_f64_lossy(),
            format!("state lost positivity: smallest eigenvalue {min:e}"),
        ));
    }
    Ok(())
}

fn check_initial<T: Real>(rho0: &DensityMatrix<T>, model: &Model<T>) -> Result<()> {
    if rho0.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            actual: rho0.dim(),
        });
    }
    Ok(())
}

/// Integrates the master equation from `rho0` over `[0, t_final]`.
///
/// `t_final` must be an integer multiple of `dt · output_stride`; the
/// returned trajectory includes both endpoints. The step may be refined as
/// described on [`IntegratorConfig::effective_step`].
pub fn evolve<T: Real>(
    rho0: &DensityMatrix<T>,
    model: &Model<T>,
    t_final: T,
    config: &IntegratorConfig<T>,
) -> Result<Trajectory<T>> {
    config.validate()?;
    check_initial(rho0, model)?;
    let steps = step_count(t_final, config.dt)?;
    if steps % config.output_stride != 0 {
        return Err(Error::invalid(
            "output_stride",
            format!("{steps} steps do not divide into samples of {}", config.output_stride),
        ));
    }
    let samples = steps / config.output_stride;
    let spacing = config.output_spacing();
    let (dt, per_sample) = config.effective_step(model.peak_coupling());
    let n_sites = rho0.n_sites();

    let mut times = Vec::with_capacity(samples + 1);
    let mut states = Vec::with_capacity(samples + 1);
    times.push(T::zero());
    states.push(rho0.clone());

    let mut rho = rho0.matrix().clone();
    let mut stepper = Stepper::new(model.dim());
    for k in 1..=samples {
        for j in 0..per_sample {
            let t = T::from_count((k - 1) * per_sample + j) * dt;
            stepper.step(model, t, dt, &mut rho);
            if config.hermitize {
                linalg::hermitize(&mut rho);
            }
        }
        let tk = T::from_count(k) * spacing;
        let state = DensityMatrix::from_matrix_unchecked(n_sites, rho.clone());
        check_sample(&state, tk, config)?;
        times.push(tk);
        states.push(state);
    }
    Ok(Trajectory { times, states, dt })
}

/// Final state at `t_final` without storing intermediate samples.
pub fn propagate<T: Real>(
    rho0: &DensityMatrix<T>,
    model: &Model<T>,
    t_final: T,
    dt: T,
    hermitize: bool,
) -> Result<DensityMatrix<T>> {
    check_initial(rho0, model)?;
    if !(dt.is_finite() && dt > T::zero()) {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    let steps = step_count(t_final, dt)?;
    let mut rho = rho0.matrix().clone();
    let mut stepper = Stepper::new(model.dim());
    for step in 0..steps {
        stepper.step(model, T::from_count(step) * dt, dt, &mut rho);
        if hermitize {
            linalg::hermitize(&mut rho);
        }
    }
    let state = DensityMatrix::from_matrix_unchecked(rho0.n_sites(), rho);
    let config = IntegratorConfig::default();
    check_sample(&state, t_final, &config)?;
    Ok(state)
}

/// Max-norm difference between the final states obtained with `dt_coarse`
/// and `dt_coarse / 2`.
pub fn convergence_check<T: Real>(rho0: &DensityMatrix<T>, model: &Model<T>, t_final: T, dt_coarse: T) -> Result<T> {
    let coarse = propagate(rho0, model, t_final, dt_coarse, true)?;
    let fine = propagate(rho0, model, t_final, dt_coarse * T::lit(0.5), true)?;
    Ok(linalg::max_abs_diff(coarse.matrix(), fine.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ChainParams, MotionParams};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn fig1a() -> Model<f64> {
        Model::new(
            ChainParams::uniform(2, 1.0, 0.2, 0.5),
            MotionParams::oscillating(2, 0.25, 1.0, FRAC_PI_2),
        )
        .unwrap()
    }

    #[test]
    fn ground_state_is_constant() {
        let rho0 = DensityMatrix::ground(2);
        let traj = evolve(&rho0, &fig1a(), 8.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(traj.len(), 801);
        for (_, s) in traj.iter() {
            assert_eq!(s, &rho0);
        }
    }

    #[test]
    fn output_grid_is_uniform() {
        let traj = evolve(
            &DensityMatrix::<f64>::site(2, 1).unwrap(),
            &fig1a(),
            1.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert_eq!(traj.len(), 101);
        for (k, &t) in traj.times.iter().enumerate() {
            assert!((t - 0.01 * k as f64).abs() < 1e-14);
        }
        assert_eq!(*traj.times.last().unwrap(), 1.0);
    }

    #[test]
    fn rejects_incommensurate_horizon() {
        let rho0 = DensityMatrix::<f64>::site(2, 1).unwrap();
        let cfg = IntegratorConfig::default();
        assert!(matches!(
            evolve(&rho0, &fig1a(), 0.0105, &cfg),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(evolve(&rho0, &fig1a(), -1.0, &cfg).is_err());
        assert!(evolve(&rho0, &fig1a(), 1.0, &cfg.clone().with_dt(0.0)).is_err());
        assert!(evolve(&rho0, &fig1a(), 1.0, &cfg.clone().with_stride(0)).is_err());
        assert!(matches!(
            evolve(&DensityMatrix::ground(3), &fig1a(), 1.0, &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn oversized_step_is_reported() {
        // J_max = 27 with dt = 0.2 is far outside the RK4 stability region.
        let model = Model::new(
            ChainParams::uniform(2, 1.0, 0.2, 0.5),
            MotionParams::frozen(2, Some(27.0)),
        )
        .unwrap();
        let cfg = IntegratorConfig::default()
            .with_dt(0.2)
            .with_stride(1)
            .with_coupling_phase(None);
        let err = evolve(&DensityMatrix::<f64>::site(2, 1).unwrap(), &model, 8.0, &cfg).unwrap_err();
        assert!(err.is_numerical(), "{err}");

        // the default cap refines the same run to 540 steps per sample
        let cfg = cfg.with_coupling_phase(Some(0.01));
        assert_eq!(cfg.effective_step(27.0).1, 540);
        let traj = evolve(&DensityMatrix::<f64>::site(2, 1).unwrap(), &model, 8.0, &cfg).unwrap();
        assert_eq!(traj.len(), 41);
        assert!((traj.dt - 0.2 / 540.0).abs() < 1e-18);
    }

    #[test]
    fn coupling_cap_only_refines() {
        let cfg = IntegratorConfig::<f64>::default();
        assert_eq!(cfg.effective_step(1.0), (1e-3, 10));
        assert_eq!(cfg.effective_step(4.0), (1e-3, 10));
        let (dt, n) = cfg.effective_step(8.0);
        assert_eq!(n, 20);
        assert!((dt - 5e-4).abs() < 1e-18);
        let (dt, n) = cfg.effective_step(27.0);
        assert_eq!(n, 68);
        assert!(dt * 27.0 <= 0.004);
        let (dt, n) = cfg.effective_step(1000.0);
        assert_eq!(n, 2500);
        assert!((dt - 4e-6).abs() < 1e-18);
        assert_eq!(cfg.clone().with_coupling_phase(None).effective_step(1000.0), (1e-3, 10));
        assert!(cfg.with_coupling_phase(Some(0.0)).validate().is_err());
    }

    #[test]
    fn coupling_cap_leaves_slow_runs_untouched() {
        let model = Model::new(
            ChainParams::uniform(2, 1.0, 0.2, 0.5),
            MotionParams::frozen(2, Some(4.0)),
        )
        .unwrap();
        let rho0 = DensityMatrix::<f64>::site(2, 1).unwrap();
        let capped = evolve(&rho0, &model, 2.0, &IntegratorConfig::default()).unwrap();
        let plain = evolve(
            &rho0,
            &model,
            2.0,
            &IntegratorConfig::default().with_coupling_phase(None),
        )
        .unwrap();
        assert_eq!(capped, plain);
    }

    #[test]
    fn stationary_state_has_zero_convergence_error() {
        let err = convergence_check(&DensityMatrix::ground(2), &fig1a(), 2.0, 0.01).unwrap();
        assert!(err < 1e-14);
    }

    #[test]
    fn rabi_populations() {
        let model = Model::new(ChainParams::uniform(2, 1.0, 0.0, 0.0), MotionParams::frozen(2, None)).unwrap();
        let cfg = IntegratorConfig::default().with_dt(PI / 4000.0).with_stride(10);
        let traj = evolve(&DensityMatrix::<f64>::site(2, 1).unwrap(), &model, PI, &cfg).unwrap();
        for (t, s) in traj.iter() {
            assert!((s.population(1) - t.cos().powi(2)).abs() < 1e-9);
            assert!((s.population(2) - t.sin().powi(2)).abs() < 1e-9);
        }
    }

    #[test]
    fn f32_smoke() {
        let model = Model::<f32>::new(
            ChainParams::uniform(2, 1.0, 0.2, 0.5),
            MotionParams::oscillating(2, 0.25, 1.0, std::f32::consts::FRAC_PI_2),
        )
        .unwrap();
        let cfg = IntegratorConfig::<f32> {
            dt: 1.0 / 512.0,
            output_stride: 8,
            trace_tolerance: 1e-3,
            positivity_tolerance: 1e-4,
            ..IntegratorConfig::default()
        };
        let traj = evolve(&DensityMatrix::<f32>::site(2, 1).unwrap(), &model, 2.0, &cfg).unwrap();
        assert_eq!(traj.len(), 129);
        let tr = traj.final_state().trace().re;
        assert!((tr - 1.0).abs() < 1e-3);
    }
}
