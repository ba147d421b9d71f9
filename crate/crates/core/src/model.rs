// SPDX-License-Identifier: Apache-2.0

//! Chain of two-level molecules in the single-excitation manifold, coupled
//! nearest-neighbour by a dipole interaction whose strength follows the
//! classical oscillation of the inter-molecular distance.
//!
//! The simulated space has dimension `N + 2` with a fixed basis order:
//! index `0` is the zero-exciton state, `1..=N` are the single-excitation
//! site states and `N + 1` is the absorbing sink.
//!
//! The generator of the dynamics is
//!
//! ```text
//! dρ/dt = i[ρ, H(t)] + L_diss(ρ) + L_sink(ρ) + L_deph(ρ)
//! H(t)  = Σ_n ε_n |n⟩⟨n| + Σ_n J_n(t) (|n⟩⟨n+1| + |n+1⟩⟨n|)
//! J_n(t) = J₀ / [1 − 2 a_n sin(ω t + φ_n)]³
//! ```
//!
//! with `ħ = 1`. All Lindblad channels are written in the form
//! `rate · [2 A ρ A† − {A†A, ρ}]`; see [`DissipationConvention`] for the one
//! channel where the effective prefactor is configurable.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::{re, Cplx, Real};

/// Prefactor convention of the site dissipation channel `σ_n⁻ = |0⟩⟨n|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DissipationConvention {
    /// `Γ_n [σ⁻ρσ⁺ − ½{σ⁺σ⁻, ρ}]`: site population decays to the ground
    /// state at rate `Γ_n`.
    #[default]
    Standard,
    /// `Γ_n [2σ⁻ρσ⁺ − {σ⁺σ⁻, ρ}]`: site population decays at rate `2Γ_n`.
    Doubled,
}

impl DissipationConvention {
    /// Multiplier applied to `Γ_n [2σ⁻ρσ⁺ − {σ⁺σ⁻, ρ}]`.
    pub fn prefactor<T: Real>(self) -> T {
        match self {
            DissipationConvention::Standard => T::lit(0.5),
            DissipationConvention::Doubled => T::one(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DissipationConvention::Standard => "standard",
            DissipationConvention::Doubled => "doubled",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "standard" => Some(DissipationConvention::Standard),
            "doubled" => Some(DissipationConvention::Doubled),
            _ => None,
        }
    }
}

/// Static description of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams<T> {
    pub n_sites: usize,
    /// Site energies `ε_n`, one per site.
    pub epsilon: Vec<T>,
    /// Base coupling `J₀` at the equilibrium distance.
    pub j0: T,
    /// Dissipation rates `Γ_n`, one per site.
    pub gamma: Vec<T>,
    /// Sink absorption rate `Γ_s` from site `N`.
    pub gamma_sink: T,
    /// Pure dephasing rates `γ_n`, one per site.
    pub gamma_deph: Vec<T>,
    pub convention: DissipationConvention,
}

impl<T: Real> ChainParams<T> {
    /// Chain with equal site energies (zero), equal dissipation rates and no
    /// dephasing.
    pub fn uniform(n_sites: usize, j0: T, gamma: T, gamma_sink: T) -> Self {
        Self {
            n_sites,
            epsilon: vec![T::zero(); n_sites],
            j0,
            gamma: vec![gamma; n_sites],
            gamma_sink,
            gamma_deph: vec![T::zero(); n_sites],
            convention: DissipationConvention::default(),
        }
    }

    pub fn with_dephasing(mut self, gamma_deph: T) -> Self {
        self.gamma_deph = vec![gamma_deph; self.n_sites];
        self
    }

    pub fn with_convention(mut self, convention: DissipationConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Hilbert space dimension, `N + 2`.
    pub fn dim(&self) -> usize {
        self.n_sites + 2
    }

    /// Basis index of the sink.
    pub fn sink_index(&self) -> usize {
        self.n_sites + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::invalid(
                "n_sites",
                format!("need at least 2 sites, got {}", self.n_sites),
            ));
        }
        let n = self.n_sites;
        for (name, len) in [
            ("epsilon", self.epsilon.len()),
            ("gamma", self.gamma.len()),
            ("gamma_deph", self.gamma_deph.len()),
        ] {
            if len != n {
                return Err(Error::invalid(name, format!("expected {n} entries, got {len}")));
            }
        }
        if self.epsilon.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("epsilon", "site energies must be finite"));
        }
        if !(self.j0.is_finite() && self.j0 > T::zero()) {
            return Err(Error::invalid("j0", format!("must be positive, got {}", self.j0)));
        }
        check_rates("gamma", &self.gamma)?;
        check_rates("gamma_s", std::slice::from_ref(&self.gamma_sink))?;
        check_rates("gamma_deph", &self.gamma_deph)?;
        Ok(())
    }

    /// Site dissipation term `L_diss(ρ)`.
    ///
    /// # Panics
    ///
    /// Panics if `rho` is not `dim × dim`.
    pub fn apply_dissipator(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        self.add_dissipator(rho, &mut out);
        out
    }

    /// Sink absorption term `L_sink(ρ)` with jump operator `|N+1⟩⟨N|`.
    ///
    /// # Panics
    ///
    /// Panics if `rho` is not `dim × dim`.
    pub fn apply_sink(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        self.add_sink(rho, &mut out);
        out
    }

    /// Pure dephasing term `Σ_n γ_n (2 P_n ρ P_n − {P_n, ρ})`, `P_n = |n⟩⟨n|`.
    ///
    /// # Panics
    ///
    /// Panics if `rho` is not `dim × dim`.
    pub fn apply_dephasing(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        self.add_dephasing(rho, &mut out);
        out
    }

    fn check_shape(&self, rho: &CMatrix<T>, out: &CMatrix<T>) {
        let d = self.dim();
        assert_eq!(rho.shape(), (d, d), "state must be {d}x{d}");
        assert_eq!(out.shape(), (d, d), "output must be {d}x{d}");
    }

    pub(crate) fn add_dissipator(&self, rho: &CMatrix<T>, out: &mut CMatrix<T>) {
        self.check_shape(rho, out);
        let scale = self.convention.prefactor::<T>();
        for (k, &rate) in self.gamma.iter().enumerate() {
            if rate == T::zero() {
                continue;
            }
            // A = |0⟩⟨n|, A†A = |n⟩⟨n|
            add_jump(rho, out, k + 1, 0, rate * scale);
        }
    }

    pub(crate) fn add_sink(&self, rho: &CMatrix<T>, out: &mut CMatrix<T>) {
        self.check_shape(rho, out);
        if self.gamma_sink == T::zero() {
            return;
        }
        add_jump(rho, out, self.n_sites, self.sink_index(), self.gamma_sink);
    }

    pub(crate) fn add_dephasing(&self, rho: &CMatrix<T>, out: &mut CMatrix<T>) {
        self.check_shape(rho, out);
        for (k, &rate) in self.gamma_deph.iter().enumerate() {
            if rate == T::zero() {
                continue;
            }
            add_jump(rho, out, k + 1, k + 1, rate);
        }
    }
}

fn check_rates<T: Real>(name: &'static str, rates: &[T]) -> Result<()> {
    match rates.iter().find(|r| !(r.is_finite() && **r >= T::zero())) {
        Some(r) => Err(Error::invalid(
            name,
            format!("rates must be finite and nonnegative, got {r}"),
        )),
        None => Ok(()),
    }
}

/// Adds `rate · [2 A ρ A† − {A†A, ρ}]` for the jump `A = |to⟩⟨from|`.
fn add_jump<T: Real>(rho: &CMatrix<T>, out: &mut CMatrix<T>, from: usize, to: usize, rate: T) {
    let d = rho.nrows();
    // A ρ A† = ρ_ff |t⟩⟨t|
    out[(to, to)] += rho[(from, from)].scale(rate + rate);
    // {|f⟩⟨f|, ρ}: row f and column f of ρ
    for j in 0..d {
        out[(from, j)] -= rho[(from, j)].scale(rate);
    }
    for i in 0..d {
        out[(i, from)] -= rho[(i, from)].scale(rate);
    }
}

/// Classical oscillation of the inter-molecular distances.
///
/// Bond `n` (between sites `n + 1` and `n + 2`, zero-based) has distance
/// `d₀[1 − 2 a_n sin(ω t + φ_n)]`. When `enabled` is false the amplitudes and
/// phases are ignored and every bond carries `static_coupling`, or `J₀` if
/// none is configured.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionParams<T> {
    pub enabled: bool,
    pub amplitudes: Vec<T>,
    pub omega: T,
    pub phases: Vec<T>,
    pub static_coupling: Option<T>,
}

impl<T: Real> MotionParams<T> {
    /// Every bond oscillates with the same amplitude and phase.
    pub fn oscillating(n_sites: usize, amplitude: T, omega: T, phase: T) -> Self {
        let bonds = n_sites.saturating_sub(1);
        Self {
            enabled: true,
            amplitudes: vec![amplitude; bonds],
            omega,
            phases: vec![phase; bonds],
            static_coupling: None,
        }
    }

    /// No motion; all bonds carry `coupling` (or `J₀` when `None`).
    pub fn frozen(n_sites: usize, coupling: Option<T>) -> Self {
        let bonds = n_sites.saturating_sub(1);
        Self {
            enabled: false,
            amplitudes: vec![T::zero(); bonds],
            omega: T::zero(),
            phases: vec![T::zero(); bonds],
            static_coupling: coupling,
        }
    }

    /// The same record with motion switched off and the bonds pinned at
    /// `coupling`.
    pub fn to_static(&self, coupling: T) -> Self {
        Self {
            enabled: false,
            static_coupling: Some(coupling),
            ..self.clone()
        }
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        let bonds = n_sites.saturating_sub(1);
        if self.amplitudes.len() != bonds {
            return Err(Error::invalid(
                "amplitudes",
                format!("expected {bonds} entries, got {}", self.amplitudes.len()),
            ));
        }
        if self.phases.len() != bonds {
            return Err(Error::invalid(
                "phases",
                format!("expected {bonds} entries, got {}", self.phases.len()),
            ));
        }
        for &a in &self.amplitudes {
            check_amplitude(a)?;
        }
        let two_pi = T::PI() + T::PI();
        if let Some(p) = self
            .phases
            .iter()
            .find(|p| !(p.is_finite() && **p >= T::zero() && **p < two_pi))
        {
            return Err(Error::invalid("phases", format!("phase must lie in [0, 2π), got {p}")));
        }
        if !(self.omega.is_finite() && self.omega >= T::zero()) {
            return Err(Error::invalid(
                "omega",
                format!("must be finite and nonnegative, got {}", self.omega),
            ));
        }
        if let Some(j) = self.static_coupling {
            if !(j.is_finite() && j > T::zero()) {
                return Err(Error::invalid("static_coupling", format!("must be positive, got {j}")));
            }
        }
        Ok(())
    }

    /// Largest coupling any bond reaches, `J₀ / (1 − 2a)³` for the most
    /// strongly driven bond.
    pub fn peak_coupling(&self, j0: T) -> T {
        if self.enabled {
            self.amplitudes
                .iter()
                .map(|&a| {
                    let stretch = T::one() - (a + a);
                    j0 / (stretch * stretch * stretch)
                })
                .fold(j0, |m, j| if j > m { j } else { m })
        } else {
            self.static_coupling.unwrap_or(j0)
        }
    }

    /// Coupling of bond `bond` at time `t`. Assumes a validated record.
    pub fn coupling(&self, j0: T, bond: usize, t: T) -> T {
        if self.enabled {
            coupling_unchecked(j0, self.amplitudes[bond], self.omega, self.phases[bond], t)
        } else {
            self.static_coupling.unwrap_or(j0)
        }
    }
}

fn check_amplitude<T: Real>(a: T) -> Result<()> {
    if a.is_finite() && a >= T::zero() && a < T::lit(0.5) {
        Ok(())
    } else {
        Err(Error::invalid(
            "amplitude",
            format!("relative amplitude must lie in [0, 1/2), got {a}"),
        ))
    }
}

#[inline]
fn coupling_unchecked<T: Real>(j0: T, a: T, omega: T, phi: T, t: T) -> T {
    let stretch = T::one() - (a + a) * (omega * t + phi).sin();
    j0 / (stretch * stretch * stretch)
}

/// Dipole coupling `J₀ / [1 − 2a sin(ωt + φ)]³` at time `t`.
///
/// Rejects `a ≥ 1/2`, where the distance can reach zero.
pub fn coupling_strength<T: Real>(j0: T, a: T, omega: T, phi: T, t: T) -> Result<T> {
    check_amplitude(a)?;
    Ok(coupling_unchecked(j0, a, omega, phi, t))
}

/// A validated chain together with its motion.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<T> {
    chain: ChainParams<T>,
    motion: MotionParams<T>,
}

impl<T: Real> Model<T> {
    pub fn new(chain: ChainParams<T>, motion: MotionParams<T>) -> Result<Self> {
        chain.validate()?;
        motion.validate(chain.n_sites)?;
        Ok(Self { chain, motion })
    }

    pub fn chain(&self) -> &ChainParams<T> {
        &self.chain
    }

    pub fn motion(&self) -> &MotionParams<T> {
        &self.motion
    }

    pub fn dim(&self) -> usize {
        self.chain.dim()
    }

    /// Bond couplings `J_n(t)`, `n = 1..N-1`.
    pub fn couplings(&self, t: T) -> Vec<T> {
        (0..self.chain.n_sites - 1)
            .map(|b| self.motion.coupling(self.chain.j0, b, t))
            .collect()
    }

    /// Upper bound of every bond coupling over all times.
    pub fn peak_coupling(&self) -> T {
        self.motion.peak_coupling(self.chain.j0)
    }

    /// Chain Hamiltonian embedded in the full space; the ground and sink
    /// rows and columns are zero.
    pub fn hamiltonian(&self, t: T) -> CMatrix<T> {
        let d = self.dim();
        let mut h = CMatrix::zeros(d, d);
        for (k, &e) in self.chain.epsilon.iter().enumerate() {
            h[(k + 1, k + 1)] = re(e);
        }
        for (b, j) in self.couplings(t).into_iter().enumerate() {
            h[(b + 1, b + 2)] = re(j);
            h[(b + 2, b + 1)] = re(j);
        }
        h
    }

    /// Right-hand side of the master equation at time `t`.
    ///
    /// # Panics
    ///
    /// Panics if `rho` is not `dim × dim`.
    pub fn rhs(&self, t: T, rho: &CMatrix<T>) -> CMatrix<T> {
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        self.rhs_into(t, rho, &mut out);
        out
    }

    /// Writes the right-hand side into `out`, overwriting it.
    pub fn rhs_into(&self, t: T, rho: &CMatrix<T>, out: &mut CMatrix<T>) {
        out.fill(Cplx::new(T::zero(), T::zero()));
        let couplings = self.couplings(t);
        self.add_coherent(&couplings, rho, out);
        self.chain.add_dissipator(rho, out);
        self.chain.add_sink(rho, out);
        self.chain.add_dephasing(rho, out);
    }

    /// Adds `i[ρ, H] = i(ρH − Hρ)` using the tridiagonal structure of H.
    fn add_coherent(&self, couplings: &[T], rho: &CMatrix<T>, out: &mut CMatrix<T>) {
        let n = self.chain.n_sites;
        let eps = &self.chain.epsilon;
        let d = self.dim();
        let times_i = |z: Cplx<T>| Cplx::new(-z.im, z.re);
        // site x couples to x - 1 through couplings[x - 2] and to x + 1
        // through couplings[x - 1]
        for x in 1..=n {
            let e = eps[x - 1];
            let left = (x >= 2).then(|| couplings[x - 2]);
            let right = (x < n).then(|| couplings[x - 1]);
            // column x of ρH
            for i in 0..d {
                let mut acc = rho[(i, x)].scale(e);
                if let Some(j) = left {
                    acc += rho[(i, x - 1)].scale(j);
                }
                if let Some(j) = right {
                    acc += rho[(i, x + 1)].scale(j);
                }
                out[(i, x)] += times_i(acc);
            }
            // row x of Hρ
            for k in 0..d {
                let mut acc = rho[(x, k)].scale(e);
                if let Some(j) = left {
                    acc += rho[(x - 1, k)].scale(j);
                }
                if let Some(j) = right {
                    acc += rho[(x + 1, k)].scale(j);
                }
                out[(x, k)] -= times_i(acc);
            }
        }
    }
}

/// Density matrix over `{ground, sites 1..N, sink}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    n_sites: usize,
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Wraps `matrix` after checking Hermiticity (1e-12), unit trace (1e-9)
    /// and positivity (smallest eigenvalue ≥ −1e-8).
    pub fn from_matrix(n_sites: usize, matrix: CMatrix<T>) -> Result<Self> {
        let d = n_sites + 2;
        if matrix.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: matrix.nrows(),
            });
        }
        let state = Self { n_sites, matrix };
        state.check_invariants(linalg::tolerance(1e-8))?;
        Ok(state)
    }

    pub(crate) fn from_matrix_unchecked(n_sites: usize, matrix: CMatrix<T>) -> Self {
        Self { n_sites, matrix }
    }

    fn basis(n_sites: usize, index: usize) -> Self {
        let d = n_sites + 2;
        let mut m = CMatrix::zeros(d, d);
        m[(index, index)] = re(T::one());
        Self { n_sites, matrix: m }
    }

    /// The zero-exciton state `|0⟩⟨0|`.
    pub fn ground(n_sites: usize) -> Self {
        Self::basis(n_sites, 0)
    }

    /// Excitation localized on site `site` (1-based).
    pub fn site(n_sites: usize, site: usize) -> Result<Self> {
        if site == 0 || site > n_sites {
            return Err(Error::invalid(
                "site",
                format!("site index {site} outside 1..={n_sites}"),
            ));
        }
        Ok(Self::basis(n_sites, site))
    }

    /// All population in the sink.
    pub fn sink(n_sites: usize) -> Self {
        Self::basis(n_sites, n_sites + 1)
    }

    /// Pure single-excitation state `Σ_k c_k |k⟩` over sites `1..=len`.
    /// The amplitudes must be normalized within 1e-12.
    pub fn from_site_amplitudes(n_sites: usize, amplitudes: &[Cplx<T>]) -> Result<Self> {
        if amplitudes.is_empty() || amplitudes.len() > n_sites {
            return Err(Error::invalid(
                "initial_state",
                format!("need 1..={n_sites} site amplitudes, got {}", amplitudes.len()),
            ));
        }
        let norm: T = amplitudes.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b);
        if (norm - T::one()).abs() > linalg::tolerance(1e-12) {
            return Err(Error::invalid(
                "initial_state",
                format!("amplitudes not normalized: Σ|c|² = {norm}"),
            ));
        }
        let d = n_sites + 2;
        let mut m = CMatrix::zeros(d, d);
        for (i, a) in amplitudes.iter().enumerate() {
            for (j, b) in amplitudes.iter().enumerate() {
                m[(i + 1, j + 1)] = a * b.conj();
            }
        }
        Ok(Self { n_sites, matrix: m })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.n_sites + 2
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Cplx<T> {
        self.matrix[(i, j)]
    }

    /// Diagonal entry `ρ_ii` (real part).
    pub fn population(&self, i: usize) -> T {
        self.matrix[(i, i)].re
    }

    pub fn trace(&self) -> Cplx<T> {
        linalg::trace(&self.matrix)
    }

    pub fn hermiticity_error(&self) -> T {
        linalg::hermiticity_error(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> T {
        linalg::hermitian_eigenvalues(&self.matrix)[0]
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> T {
        self.matrix.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b)
    }

    /// Checks the density-matrix invariants; `positivity_tolerance` bounds how
    /// negative the smallest eigenvalue may be.
    pub fn check_invariants(&self, positivity_tolerance: T) -> Result<()> {
        let herm = self.hermiticity_error();
        if !(herm <= linalg::tolerance(1e-12)) {
            return Err(Error::invalid("rho", format!("not Hermitian: max|ρ − ρ†| = {herm:e}")));
        }
        let tr = self.trace();
        let drift = (tr - re(T::one())).norm_sqr().sqrt();
        if !(drift <= linalg::tolerance(1e-9)) {
            return Err(Error::invalid("rho", format!("trace {} + {}i is not 1", tr.re, tr.im)));
        }
        let min = self.min_eigenvalue();
        if !(min >= -positivity_tolerance) {
            return Err(Error::invalid(
                "rho",
                format!("not positive semidefinite: min eigenvalue {min:e}"),
            ));
        }
        Ok(())
    }
}
