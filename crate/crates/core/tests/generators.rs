// SPDX-License-Identifier: Apache-2.0

mod common;

use common::superop::{self, M};
use exciton_chain::{ChainParams, DissipationConvention, Model, MotionParams};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

fn chain(n: usize) -> ChainParams<f64> {
    let mut c = ChainParams::uniform(n, 1.0, 0.0, 0.35);
    c.gamma = (0..n).map(|k| 0.1 + 0.07 * k as f64).collect();
    c.gamma_deph = (0..n).map(|k| 0.05 + 0.03 * k as f64).collect();
    c
}

#[test]
fn channels_match_superoperator_on_random_states() {
    for n in 2..=4 {
        let d = n + 2;
        for convention in [DissipationConvention::Standard, DissipationConvention::Doubled] {
            let chain = chain(n).with_convention(convention);
            let diss = superop::dissipation(n, &chain.gamma, convention.prefactor());
            let sink = superop::sink(n, chain.gamma_sink);
            let deph = superop::dephasing(n, &chain.gamma_deph);
            for seed in 0..100 {
                let rho = superop::random_density(d, seed + 1000 * n as u64);
                let checks = [
                    ("dissipator", chain.apply_dissipator(&rho), superop::apply(&diss, &rho)),
                    ("sink", chain.apply_sink(&rho), superop::apply(&sink, &rho)),
                    ("dephasing", chain.apply_dephasing(&rho), superop::apply(&deph, &rho)),
                ];
                for (name, got, want) in checks {
                    let err = superop::max_abs_diff(&got, &want);
                    assert!(err <= 1e-12, "{name} N={n} seed={seed}: {err:e}");
                }
            }
        }
    }
}

#[test]
fn full_rhs_matches_liouvillian() {
    let n = 3;
    let mut c = chain(n);
    c.epsilon = vec![0.3, -0.2, 0.1];
    let mut motion = MotionParams::oscillating(n, 0.2, 2.5, 1.1);
    motion.phases[1] = 2.0;
    motion.amplitudes[1] = 0.3;
    let model = Model::new(c.clone(), motion).unwrap();
    for (seed, &t) in [0.0, 0.37, 1.9, 5.5].iter().enumerate() {
        let h = model.hamiltonian(t);
        let l = superop::coherent(&h)
            + superop::dissipation(n, &c.gamma, c.convention.prefactor())
            + superop::sink(n, c.gamma_sink)
            + superop::dephasing(n, &c.gamma_deph);
        let rho = superop::random_density(n + 2, 77 + seed as u64);
        let err = superop::max_abs_diff(&model.rhs(t, &rho), &superop::apply(&l, &rho));
        assert!(err <= 1e-12, "t={t}: {err:e}");
    }
}

fn coherent_pair(p1: f64, p2: f64, coh: Complex64, rest: f64) -> M {
    let mut m = M::zeros(4, 4);
    m[(0, 0)] = Complex64::new(rest, 0.0);
    m[(1, 1)] = Complex64::new(p1, 0.0);
    m[(2, 2)] = Complex64::new(p2, 0.0);
    m[(1, 2)] = coh;
    m[(2, 1)] = coh.conj();
    m
}

#[test]
fn dissipation_damps_coherence_at_sum_of_rates() {
    // (|1⟩ + |2⟩)(⟨1| + ⟨2|)/2 under Γ₁ = Γ₂ = 0.2 with doubled rates
    let rho = coherent_pair(0.5, 0.5, Complex64::new(0.5, 0.0), 0.0);
    let chain = ChainParams::uniform(2, 1.0, 0.2, 0.0).with_convention(DissipationConvention::Doubled);
    let oracle = superop::apply(&superop::dissipation(2, &[0.2, 0.2], 1.0), &rho);
    let got = chain.apply_dissipator(&rho);
    assert!((oracle[(1, 2)].re - (-0.4 * 0.5)).abs() < 1e-15);
    assert!(superop::max_abs_diff(&got, &oracle) < 1e-15);
}

#[test]
fn sink_damps_coherence_at_sink_rate() {
    let coh = Complex64::new(0.2, 0.1);
    let rho = coherent_pair(0.5, 0.5, coh, 0.0);
    let chain = ChainParams::uniform(2, 1.0, 0.0, 0.5);
    let oracle = superop::apply(&superop::sink(2, 0.5), &rho);
    assert!((oracle[(1, 2)] - coh * -0.5).norm() < 1e-15);
    assert!(superop::max_abs_diff(&chain.apply_sink(&rho), &oracle) < 1e-15);
}

#[test]
fn dephasing_damps_coherence_at_sum_of_rates() {
    let coh = Complex64::new(0.5, 0.0);
    let rho = coherent_pair(0.5, 0.5, coh, 0.0);
    let chain = ChainParams::uniform(2, 1.0, 0.0, 0.0).with_dephasing(0.1);
    let oracle = superop::apply(&superop::dephasing(2, &[0.1, 0.1]), &rho);
    assert!((oracle[(1, 2)] - coh * -0.2).norm() < 1e-15);
    assert!(superop::max_abs_diff(&chain.apply_dephasing(&rho), &oracle) < 1e-15);
}

#[test]
fn coherent_term_matches_dense_commutator() {
    let model = Model::new(
        ChainParams::uniform(2, 1.0, 0.0, 0.0),
        MotionParams::frozen(2, Some(2.0)),
    )
    .unwrap();
    let rho = superop::ket_bra(4, 1, 1);
    let got = model.rhs(0.0, &rho);
    let h = model.hamiltonian(0.0);
    let want = superop::apply(&superop::coherent(&h), &rho);
    assert!(superop::max_abs_diff(&got, &want) < 1e-15);
    // dρ₁₂/dt = iJ(ρ₁₁ − ρ₂₂)
    assert!((got[(1, 2)] - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    assert_eq!(got[(1, 1)], Complex64::new(0.0, 0.0));
}

#[test]
fn sink_is_absorbing() {
    let chain = ChainParams::uniform(2, 1.0, 0.2, 0.5).with_dephasing(0.1);
    let model = Model::new(chain, MotionParams::oscillating(2, 0.25, 1.0, FRAC_PI_2)).unwrap();
    let rho = superop::ket_bra(4, 3, 3);
    for t in [0.0, 1.0, 2.5] {
        assert!(model.rhs(t, &rho).iter().all(|z| z.norm() == 0.0));
    }
}
