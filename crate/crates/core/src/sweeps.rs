// SPDX-License-Identifier: Apache-2.0

//! Paired motional/static scans over the oscillation frequency, phase,
//! amplitude and initial state.
//!
//! Every grid point runs two evolutions from the same initial state: one
//! with the oscillating coupling and one with the coupling frozen at its
//! closest-approach value `J₀ / (1 − 2a₁)³`. Points are independent and run
//! on a rayon pool; rows are assembled by grid index, so the table does not
//! depend on scheduling.

use rayon::prelude::*;

use crate::dynamics::{evolve, IntegratorConfig};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{ChainParams, DensityMatrix, Model, MotionParams};
use crate::observables::{time_average, ObservableSeries};
use crate::scalar::{Cplx, Real};

/// Parameter scanned by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Omega,
    Phi,
    Amplitude,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Omega => "omega",
            SweepAxis::Phi => "phi",
            SweepAxis::Amplitude => "a1",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "omega" => Some(SweepAxis::Omega),
            "phi" => Some(SweepAxis::Phi),
            "a1" | "amplitude" => Some(SweepAxis::Amplitude),
            _ => None,
        }
    }
}

/// Pure initial state `c₁|1⟩ + c₂|2⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState<T> {
    pub c1: Cplx<T>,
    pub c2: Cplx<T>,
}

impl<T: Real> InitialState<T> {
    pub fn new(c1: Cplx<T>, c2: Cplx<T>) -> Result<Self> {
        let s = Self { c1, c2 };
        s.validate()?;
        Ok(s)
    }

    /// Real amplitudes.
    pub fn real(c1: T, c2: T) -> Result<Self> {
        Self::new(Cplx::new(c1, T::zero()), Cplx::new(c2, T::zero()))
    }

    /// Excitation localized on molecule 1.
    pub fn site_one() -> Self {
        Self {
            c1: Cplx::new(T::one(), T::zero()),
            c2: Cplx::new(T::zero(), T::zero()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.c1.norm_sqr() + self.c2.norm_sqr();
        if (norm - T::one()).abs() > linalg::tolerance(1e-12) {
            return Err(Error::invalid(
                "initial_state",
                format!("|c1|² + |c2|² = {norm}, expected 1"),
            ));
        }
        Ok(())
    }

    pub fn density_matrix(&self, n_sites: usize) -> Result<DensityMatrix<T>> {
        DensityMatrix::from_site_amplitudes(n_sites, &[self.c1, self.c2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec<T> {
    pub axis: SweepAxis,
    pub grid: Vec<T>,
    pub chain: ChainParams<T>,
    /// Motion applied at every point; the swept parameter overrides the
    /// matching field on every bond.
    pub motion: MotionParams<T>,
    pub initial_state: InitialState<T>,
    pub horizon: T,
    pub integrator: IntegratorConfig<T>,
}

impl<T: Real> SweepSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::invalid("grid", "sweep grid is empty"));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("grid", "grid must be strictly increasing"));
        }
        if self.chain.n_sites != 2 {
            return Err(Error::invalid(
                "n_sites",
                "sweeps report the concurrence of molecules 1 and 2 and need a two-site chain",
            ));
        }
        if self.axis == SweepAxis::Amplitude {
            if let Some(a) = self.grid.iter().find(|a| !(**a >= T::zero() && **a < T::lit(0.5))) {
                return Err(Error::invalid("grid", format!("amplitude {a} outside [0, 1/2)")));
            }
        }
        self.initial_state.validate()?;
        self.integrator.validate()?;
        self.chain.validate()?;
        Ok(())
    }

    /// Motional parameters for one grid point.
    pub fn motion_at(&self, axis_value: T) -> MotionParams<T> {
        let mut motion = self.motion.clone();
        motion.enabled = true;
        match self.axis {
            SweepAxis::Omega => motion.omega = axis_value,
            SweepAxis::Phi => motion.phases.iter_mut().for_each(|p| *p = axis_value),
            SweepAxis::Amplitude => motion.amplitudes.iter_mut().for_each(|a| *a = axis_value),
        }
        motion
    }
}

/// Constant coupling of the static comparison run: the motional coupling
/// at closest approach, `J₀ / (1 − 2a₁)³`.
pub fn static_counterpart<T: Real>(j0: T, a1: T) -> Result<T> {
    if !(a1.is_finite() && a1 >= T::zero() && a1 < T::lit(0.5)) {
        return Err(Error::invalid(
            "amplitude",
            format!("relative amplitude must lie in [0, 1/2), got {a1}"),
        ));
    }
    let s = T::one() - (a1 + a1);
    Ok(j0 / (s * s * s))
}

/// Time averages of one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub axis_value: T,
    pub c_motion: T,
    pub c_static: T,
    pub p_motion: T,
    pub p_static: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub spec: SweepSpec<T>,
    pub rows: Vec<SweepRow<T>>,
}

/// Averaged concurrence and sink population of one evolution.
fn averages<T: Real>(model: &Model<T>, spec: &SweepSpec<T>) -> Result<(T, T)> {
    let rho0 = spec.initial_state.density_matrix(spec.chain.n_sites)?;
    let traj = evolve(&rho0, model, spec.horizon, &spec.integrator)?;
    let c = time_average(&ObservableSeries::concurrence_fast(&traj)?)?;
    let p = time_average(&ObservableSeries::sink_population(&traj)?)?;
    Ok((c, p))
}

/// Runs the motional and static evolutions of one grid point.
pub fn run_point<T: Real>(axis_value: T, spec: &SweepSpec<T>) -> Result<SweepRow<T>> {
    let attach = |e: Error| Error::SweepPoint {
        axis: spec.axis.name(),
        value: axis_value.to_f64_lossy(),
        source: Box::new(e),
    };
    let motion = spec.motion_at(axis_value);
    let j_max = static_counterpart(spec.chain.j0, motion.amplitudes[0]).map_err(attach)?;
    let moving = Model::new(spec.chain.clone(), motion.clone()).map_err(attach)?;
    let frozen = Model::new(spec.chain.clone(), motion.to_static(j_max)).map_err(attach)?;
    let (c_motion, p_motion) = averages(&moving, spec).map_err(attach)?;
    let (c_static, p_static) = averages(&frozen, spec).map_err(attach)?;
    Ok(SweepRow {
        axis_value,
        c_motion,
        c_static,
        p_motion,
        p_static,
    })
}

/// Runs every grid point. `jobs` bounds the worker count (`None` uses the
/// global rayon pool). Either all rows are returned or none.
pub fn run_sweep<T: Real>(spec: &SweepSpec<T>, jobs: Option<usize>) -> Result<SweepResult<T>> {
    spec.validate()?;
    let outcomes: Vec<Result<SweepRow<T>>> = match jobs {
        Some(0) => return Err(Error::invalid("jobs", "worker count must be at least 1")),
        Some(1) => spec.grid.iter().map(|&v| run_point(v, spec)).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::invalid("jobs", e.to_string()))?
            .install(|| spec.grid.par_iter().map(|&v| run_point(v, spec)).collect()),
        None => spec.grid.par_iter().map(|&v| run_point(v, spec)).collect(),
    };

    let total = outcomes.len();
    let mut rows = Vec::with_capacity(total);
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(e),
        }
    }
    if let Some(first) = failures.first() {
        return Err(Error::SweepFailed {
            failed: failures.len(),
            total,
            first: Box::new(first.clone()),
        });
    }

    let result = SweepResult {
        spec: spec.clone(),
        rows,
    };
    if spec.axis == SweepAxis::Omega {
        let spread = result.static_spread();
        if spread > linalg::tolerance(1e-9) {
            return Err(Error::numerical(
                spec.horizon.to_f64_lossy(),
                format!("static averages vary by {spread:e} across the ω grid"),
            ));
        }
    }
    Ok(result)
}

impl<T: Real> SweepResult<T> {
    /// Largest spread of the static columns across rows.
    pub fn static_spread(&self) -> T {
        let spread = |f: fn(&SweepRow<T>) -> T| {
            let (lo, hi) = self
                .rows
                .iter()
                .map(f)
                .fold((T::max_value().unwrap(), T::min_value().unwrap()), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                });
            hi - lo
        };
        spread(|r| r.c_static).max(spread(|r| r.p_static))
    }

    /// Row with the largest motional average concurrence.
    pub fn argmax_motion(&self) -> Option<&SweepRow<T>> {
        self.rows.iter().fold(None, |best: Option<&SweepRow<T>>, r| match best {
            Some(b) if b.c_motion >= r.c_motion => Some(b),
            _ => Some(r),
        })
    }

    /// Fraction of rows where the motional average concurrence exceeds the
    /// static one.
    pub fn enhanced_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let n = self.rows.iter().filter(|r| r.c_motion > r.c_static).count();
        n as f64 / self.rows.len() as f64
    }

    /// Pearson correlation between the entanglement gain
    /// `C̄_motion − C̄_static` and the sink gain `p̄_motion − p̄_static`.
    /// Negative values express the entanglement/transfer trade-off.
    pub fn tradeoff_correlation(&self) -> Option<f64> {
        let dc: Vec<f64> = self
            .rows
            .iter()
            .map(|r| (r.c_motion - r.c_static).to_f64_lossy())
            .collect();
        let dp: Vec<f64> = self
            .rows
            .iter()
            .map(|r| (r.p_motion - r.p_static).to_f64_lossy())
            .collect();
        pearson(&dc, &dp)
    }
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Uniform grid `start, start + step, …` up to and including `stop`
/// (within a relative tolerance). Values are computed as `start + k·step`.
pub fn uniform_grid<T: Real>(start: T, stop: T, step: T) -> Result<Vec<T>> {
    if !(step > T::zero()) || !(stop >= start) {
        return Err(Error::invalid(
            "grid",
            format!("cannot build grid {start}..{stop} step {step}"),
        ));
    }
    let span = (stop - start) / step;
    let count = (span + T::lit(1e-9))
        .floor()
        .to_usize()
        .ok_or_else(|| Error::invalid("grid", "too many points"))?;
    Ok((0..=count).map(|k| start + T::from_count(k) * step).collect())
}
