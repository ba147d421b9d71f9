// SPDX-License-Identifier: Apache-2.0

//! Entanglement of molecules 1 and 2, sink population, and their time
//! averages.
//!
//! For the two-site chain the four-level state is mapped onto two qubits:
//! an excitation on site `n` means qubit `n` is excited, and both the
//! zero-exciton state and the sink mean both qubits are in the ground state.

use nalgebra::{ComplexField, Matrix2, Matrix4};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::DensityMatrix;
use crate::scalar::{re, Cplx, Real};

/// Two-qubit density matrix over `{|e₁e₂⟩, |e₁g₂⟩, |g₁e₂⟩, |g₁g₂⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState<T: Real>(pub Matrix4<Cplx<T>>);

impl<T: Real> TwoQubitState<T> {
    pub const EE: usize = 0;
    pub const EG: usize = 1;
    pub const GE: usize = 2;
    pub const GG: usize = 3;

    pub fn matrix(&self) -> &Matrix4<Cplx<T>> {
        &self.0
    }

    /// Spin-flipped state `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
    pub fn spin_flipped(&self) -> Matrix4<Cplx<T>> {
        let yy = spin_flip_operator::<T>();
        yy * self.0.map(|z| z.conj()) * yy
    }
}

/// Maps the two-site chain state onto the two-qubit state of molecules 1
/// and 2. Coherences between the zero- and one-excitation sectors are
/// dropped.
pub fn reduce_to_two_qubits<T: Real>(rho: &DensityMatrix<T>) -> Result<TwoQubitState<T>> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let (eg, ge, gg) = (TwoQubitState::<T>::EG, TwoQubitState::<T>::GE, TwoQubitState::<T>::GG);
    let mut q = Matrix4::zeros();
    q[(eg, eg)] = rho.entry(1, 1);
    q[(ge, ge)] = rho.entry(2, 2);
    q[(eg, ge)] = rho.entry(1, 2);
    q[(ge, eg)] = rho.entry(2, 1);
    q[(gg, gg)] = rho.entry(0, 0) + rho.entry(3, 3);
    Ok(TwoQubitState(q))
}

/// Eigenvalues of `ρ` more negative than this signal a broken state.
const NEGATIVE_LIMIT: f64 = 1e-8;

fn spin_flip_operator<T: Real>() -> Matrix4<Cplx<T>> {
    let zero = re(T::zero());
    let i = Cplx::new(T::zero(), T::one());
    let sigma_y = Matrix2::new(zero, -i, i, zero);
    sigma_y.kronecker(&sigma_y)
}

/// Square roots `√λ_i` of the eigenvalues of `ρ ρ̃`, in decreasing order.
///
/// With `ρ = Ψ Ψ†` (Ψ from the eigendecomposition of ρ) the product `ρ ρ̃`
/// shares its nonzero spectrum with `τ† τ`, `τ = Ψᵀ (σ_y ⊗ σ_y) Ψ`, so the
/// `√λ_i` are the singular values of τ. Taking them this way keeps full
/// absolute accuracy where `λ_i` is close to zero.
pub fn wootters_roots<T: Real>(q: &TwoQubitState<T>) -> Result<[T; 4]> {
    let mut h = q.0;
    // Hermitian part; eigen-solve only reads one triangle.
    h = (h + h.adjoint()).scale(T::lit(0.5));
    let eig = h.symmetric_eigen();
    let limit = linalg::tolerance::<T>(NEGATIVE_LIMIT);
    let mut psi = eig.eigenvectors;
    for (k, &p) in eig.eigenvalues.iter().enumerate() {
        if p < -limit {
            return Err(Error::numerical(
                f64::NAN,
                format!("two-qubit state has eigenvalue {p:e}"),
            ));
        }
        let w = p.max(T::zero()).sqrt();
        psi.column_mut(k).apply(|z| *z = z.scale(w));
    }
    let tau = psi.transpose() * spin_flip_operator::<T>() * psi;
    let mut roots = [T::zero(); 4];
    for (r, s) in roots.iter_mut().zip(tau.singular_values().iter()) {
        *r = *s;
    }
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(roots)
}

/// Wootters concurrence `max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}`, with `λ_i` the
/// eigenvalues of `ρ ρ̃` in decreasing order (see [`wootters_roots`]).
pub fn concurrence<T: Real>(q: &TwoQubitState<T>) -> Result<T> {
    let r = wootters_roots(q)?;
    let c = r[0] - r[1] - r[2] - r[3];
    Ok(c.max(T::zero()).min(T::one()))
}

/// Closed-form concurrence `2|ρ₁₂|` of a two-site chain state; exact
/// because the double-excitation population vanishes.
pub fn concurrence_fast<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let c = rho.entry(1, 2).modulus();
    Ok(c + c)
}

/// Population of the sink, `Tr(|N+1⟩⟨N+1| ρ)`.
pub fn sink_population<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.population(rho.n_sites() + 1)
}

/// Scalar observable sampled on a trajectory's time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Real> ObservableSeries<T> {
    /// Checks that `times` is a uniform grid starting at zero and that the
    /// two sequences have equal length (at least two samples).
    pub fn new(times: Vec<T>, values: Vec<T>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid(
                "series",
                format!("{} times but {} values", times.len(), values.len()),
            ));
        }
        if times.len() < 2 {
            return Err(Error::invalid("series", "need at least two samples"));
        }
        let h = times[1] - times[0];
        if times[0] != T::zero() || !(h > T::zero()) {
            return Err(Error::invalid("series", "grid must start at 0 and increase"));
        }
        let tol = linalg::tolerance::<T>(1e-9) * times[times.len() - 1].max(T::one());
        for (k, &t) in times.iter().enumerate() {
            if (t - T::from_count(k) * h).abs() > tol {
                return Err(Error::invalid("series", format!("grid not uniform at sample {k}")));
            }
        }
        Ok(Self { times, values })
    }

    pub fn map_trajectory<F>(traj: &Trajectory<T>, f: F) -> Result<Self>
    where
        F: FnMut(&DensityMatrix<T>) -> Result<T>,
    {
        let values = traj.states.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(traj.times.clone(), values)
    }

    /// Full Wootters concurrence along a trajectory.
    pub fn concurrence(traj: &Trajectory<T>) -> Result<Self> {
        Self::map_trajectory(traj, |s| concurrence(&reduce_to_two_qubits(s)?))
    }

    /// Closed-form concurrence `2|ρ₁₂|` along a trajectory.
    pub fn concurrence_fast(traj: &Trajectory<T>) -> Result<Self> {
        Self::map_trajectory(traj, concurrence_fast)
    }

    pub fn sink_population(traj: &Trajectory<T>) -> Result<Self> {
        Self::map_trajectory(traj, |s| Ok(sink_population(s)))
    }

    pub fn horizon(&self) -> T {
        self.times[self.times.len() - 1]
    }

    pub fn max(&self) -> T {
        self.values[1..].iter().fold(self.values[0], |a, &b| a.max(b))
    }
}

/// Trapezoidal time average `(1/T) ∫₀ᵀ f(t) dt` over the series grid.
pub fn time_average<T: Real>(series: &ObservableSeries<T>) -> Result<T> {
    if series.values.len() < 2 || series.values.len() != series.times.len() {
        return Err(Error::invalid("series", "need at least two aligned samples"));
    }
    let half = T::lit(0.5);
    let integral = series
        .times
        .windows(2)
        .zip(series.values.windows(2))
        .fold(T::zero(), |acc, (t, v)| acc + (t[1] - t[0]) * (v[0] + v[1]) * half);
    Ok(integral / (series.horizon() - series.times[0]))
}

/// Applies [`concurrence`] to an arbitrary 4×4 two-qubit matrix; mainly
/// useful for states that do not come from a chain.
pub fn concurrence_of_matrix<T: Real>(m: &CMatrix<T>) -> Result<T> {
    if m.shape() != (4, 4) {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: m.nrows(),
        });
    }
    concurrence(&TwoQubitState(Matrix4::from_fn(|i, j| m[(i, j)])))
}
