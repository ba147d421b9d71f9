// SPDX-License-Identifier: Apache-2.0

//! Brute-force Liouvillian oracle.
//!
//! Builds each Lindblad channel as an explicit `d² × d²` superoperator from
//! dense jump operators, using column-stacking `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`.
//! Shares nothing with the index-based generators in the library.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;

pub fn ket_bra(d: usize, i: usize, j: usize) -> M {
    let mut m = M::zeros(d, d);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

fn kron(a: &M, b: &M) -> M {
    a.kronecker(b)
}

/// Superoperator of `ρ ↦ A ρ B`.
pub fn sandwich(a: &M, b: &M) -> M {
    kron(&b.transpose(), a)
}

/// Superoperator of `ρ ↦ rate · [2 L ρ L† − L†L ρ − ρ L†L]`.
pub fn lindblad_channel(l: &M, rate: f64) -> M {
    let d = l.nrows();
    let id = M::identity(d, d);
    let ld = l.adjoint();
    let ldl = &ld * l;
    let two = Complex64::new(2.0, 0.0);
    (sandwich(l, &ld) * two - sandwich(&ldl, &id) - sandwich(&id, &ldl)) * Complex64::new(rate, 0.0)
}

/// Superoperator of `ρ ↦ i(ρH − Hρ)`.
pub fn coherent(h: &M) -> M {
    let d = h.nrows();
    let id = M::identity(d, d);
    (sandwich(&id, h) - sandwich(h, &id)) * Complex64::new(0.0, 1.0)
}

pub fn vec(rho: &M) -> DVector<Complex64> {
    DVector::from_column_slice(rho.as_slice())
}

pub fn unvec(v: &DVector<Complex64>, d: usize) -> M {
    M::from_column_slice(d, d, v.as_slice())
}

pub fn apply(superop: &M, rho: &M) -> M {
    unvec(&(superop * vec(rho)), rho.nrows())
}

/// Site dissipation `Σ_n rate_n [2σ⁻ρσ⁺ − {σ⁺σ⁻, ρ}]` with `σ_n⁻ = |0⟩⟨n|`;
/// `prefactor` scales every rate.
pub fn dissipation(n_sites: usize, gamma: &[f64], prefactor: f64) -> M {
    let d = n_sites + 2;
    let mut total = M::zeros(d * d, d * d);
    for (k, &g) in gamma.iter().enumerate() {
        let sigma_minus = ket_bra(d, 0, k + 1);
        total += lindblad_channel(&sigma_minus, g * prefactor);
    }
    total
}

/// Sink absorption with jump `σ_{N+1}⁺ σ_N⁻`.
pub fn sink(n_sites: usize, gamma_s: f64) -> M {
    let d = n_sites + 2;
    let raise_sink = ket_bra(d, n_sites + 1, 0);
    let lower_last = ket_bra(d, 0, n_sites);
    lindblad_channel(&(raise_sink * lower_last), gamma_s)
}

/// Dephasing with projectors `σ_n⁺ σ_n⁻`.
pub fn dephasing(n_sites: usize, gamma: &[f64]) -> M {
    let d = n_sites + 2;
    let mut total = M::zeros(d * d, d * d);
    for (k, &g) in gamma.iter().enumerate() {
        let p = ket_bra(d, k + 1, 0) * ket_bra(d, 0, k + 1);
        total += lindblad_channel(&p, g);
    }
    total
}

/// Random density matrix `A A† / Tr(A A†)` from a deterministic LCG.
pub fn random_density(d: usize, seed: u64) -> M {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let a = M::from_fn(d, d, |_, _| Complex64::new(next(), next()));
    let rho = &a * a.adjoint();
    let tr: Complex64 = rho.diagonal().iter().sum();
    rho / tr
}

pub fn max_abs_diff(a: &M, b: &M) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
