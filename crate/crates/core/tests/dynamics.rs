// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{FRAC_PI_2, PI};

use exciton_chain::linalg::{max_abs_diff, CMatrix};
use exciton_chain::observables::{time_average, ObservableSeries};
use exciton_chain::{
    convergence_check, evolve, propagate, ChainParams, DensityMatrix, IntegratorConfig, Model, MotionParams,
};
use num_complex::Complex64;

fn reference_chain() -> ChainParams<f64> {
    ChainParams::uniform(2, 1.0, 0.2, 0.5)
}

fn rabi_model(j: f64) -> Model<f64> {
    Model::new(ChainParams::uniform(2, 1.0, 0.0, 0.0), MotionParams::frozen(2, Some(j))).unwrap()
}

/// Closed-form state for ρ(0) = |1⟩⟨1| with all rates zero and constant J:
/// |ψ(t)⟩ = cos(Jt)|1⟩ − i sin(Jt)|2⟩.
fn rabi_exact(j: f64, t: f64) -> CMatrix<f64> {
    let a = Complex64::new((j * t).cos(), 0.0);
    let b = Complex64::new(0.0, -(j * t).sin());
    let mut m = CMatrix::zeros(4, 4);
    m[(1, 1)] = a * a.conj();
    m[(1, 2)] = a * b.conj();
    m[(2, 1)] = b * a.conj();
    m[(2, 2)] = b * b.conj();
    m
}

#[test]
fn rabi_oscillation_matches_closed_form() {
    let j = 1.0;
    let cfg = IntegratorConfig::default().with_dt(PI / 3200.0).with_stride(10);
    let traj = evolve(&DensityMatrix::site(2, 1).unwrap(), &rabi_model(j), PI, &cfg).unwrap();
    let conc = ObservableSeries::concurrence(&traj).unwrap();
    for ((t, state), c) in traj.iter().zip(&conc.values) {
        assert!(max_abs_diff(state.matrix(), &rabi_exact(j, t)) < 1e-9, "t = {t}");
        assert!((c - (2.0 * j * t).sin().abs()).abs() < 1e-6, "t = {t}");
    }
}

#[test]
fn fourth_order_convergence_against_exact_solution() {
    let j = 1.0;
    let t_final = 2.0;
    let exact = rabi_exact(j, t_final);
    let rho0 = DensityMatrix::site(2, 1).unwrap();
    let err = |dt: f64| {
        let s = propagate(&rho0, &rabi_model(j), t_final, dt, false).unwrap();
        max_abs_diff(s.matrix(), &exact)
    };
    let (e1, e2, e3) = (err(0.04), err(0.02), err(0.01));
    for ratio in [e1 / e2, e2 / e3] {
        assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
    }
    // dt = 0.01 vs 0.005 against an exact reference
    let ratio = err(0.01) / err(0.005);
    assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn fastest_drive_is_resolved_at_default_step() {
    // ω = 5, a₁ = 1/3, peak coupling 27
    let model = Model::new(
        reference_chain(),
        MotionParams::oscillating(2, 1.0 / 3.0, 5.0, FRAC_PI_2),
    )
    .unwrap();
    let rho0 = DensityMatrix::site(2, 1).unwrap();
    let coarse = propagate(&rho0, &model, 8.0, 1e-3, true).unwrap();
    let reference = propagate(&rho0, &model, 8.0, 1e-5, true).unwrap();
    let err = max_abs_diff(coarse.matrix(), reference.matrix());
    // measured 6.8e-8 against the dt = 1e-5 reference
    assert!(err < 1e-7, "error {err:e}");

    // step-halving sees 15/16 of the coarse error for a fourth-order scheme
    let halving = convergence_check(&rho0, &model, 8.0, 1e-3).unwrap();
    assert!(
        (halving / err - 15.0 / 16.0).abs() < 0.05,
        "halving {halving:e} vs {err:e}"
    );
}

#[test]
fn invariants_hold_along_fig1a_trajectory() {
    let model = Model::new(reference_chain(), MotionParams::oscillating(2, 0.25, 1.0, FRAC_PI_2)).unwrap();
    let traj = evolve(
        &DensityMatrix::site(2, 1).unwrap(),
        &model,
        8.0,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert_eq!(traj.len(), 801);
    for (t, s) in traj.iter() {
        assert!(
            (s.trace().re - 1.0).abs() <= 1e-9 && s.trace().im.abs() <= 1e-9,
            "t = {t}"
        );
        assert!(s.hermiticity_error() <= 1e-12);
        assert!(s.min_eigenvalue() >= -1e-8);
        // the dynamics never couples the zero- and one-excitation sectors
        for k in 1..=2 {
            for other in [0, 3] {
                assert_eq!(s.entry(k, other), Complex64::new(0.0, 0.0));
            }
        }
    }
}

#[test]
fn closed_chain_evolution_is_unitary() {
    let model = Model::new(
        ChainParams::uniform(3, 1.0, 0.0, 0.0),
        MotionParams::oscillating(3, 0.2, 3.0, 1.0),
    )
    .unwrap();
    let s = 1.0 / 3f64.sqrt();
    let amps = [Complex64::new(s, 0.0), Complex64::new(0.0, s), Complex64::new(s, 0.0)];
    let traj = evolve(
        &DensityMatrix::from_site_amplitudes(3, &amps).unwrap(),
        &model,
        8.0,
        &IntegratorConfig::default(),
    )
    .unwrap();
    for (t, state) in traj.iter() {
        assert!((state.purity() - 1.0).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn sink_population_never_decreases_without_dissipation() {
    let mut chain = reference_chain();
    chain.gamma = vec![0.0, 0.0];
    let model = Model::new(chain, MotionParams::oscillating(2, 0.25, 1.0, FRAC_PI_2)).unwrap();
    let traj = evolve(
        &DensityMatrix::site(2, 1).unwrap(),
        &model,
        8.0,
        &IntegratorConfig::default(),
    )
    .unwrap();
    let sink = ObservableSeries::sink_population(&traj).unwrap();
    assert_eq!(sink.values[0], 0.0);
    for w in sink.values.windows(2) {
        assert!(w[1] >= w[0] - 1e-15);
    }
    assert!(sink.values[800] > sink.values[400]);
}

#[test]
fn reference_average_for_slow_drive() {
    let model = Model::new(reference_chain(), MotionParams::oscillating(2, 0.25, 1.0, FRAC_PI_2)).unwrap();
    let traj = evolve(
        &DensityMatrix::site(2, 1).unwrap(),
        &model,
        8.0,
        &IntegratorConfig::default(),
    )
    .unwrap();
    let c = time_average(&ObservableSeries::concurrence(&traj).unwrap()).unwrap();
    assert!((c - 0.1461).abs() <= 0.003, "C̄ = {c}");
}

#[test]
fn reference_average_for_omega_two() {
    let model = Model::new(reference_chain(), MotionParams::oscillating(2, 0.25, 2.0, FRAC_PI_2)).unwrap();
    let traj = evolve(
        &DensityMatrix::site(2, 1).unwrap(),
        &model,
        8.0,
        &IntegratorConfig::default(),
    )
    .unwrap();
    let c = time_average(&ObservableSeries::concurrence(&traj).unwrap()).unwrap();
    assert!((c - 0.1571).abs() <= 0.003, "C̄ = {c}");
}

mod invariants {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn evolution_keeps_a_physical_state(
            n in 2usize..5,
            amps in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4),
            g in 0.0..0.5f64,
            gs in 0.0..1.0f64,
            gd in 0.0..0.3f64,
            a in 0.0..0.4f64,
            omega in 0.1..8.0f64,
            phi in 0.0..std::f64::consts::TAU,
        ) {
            let raw: Vec<Complex64> = amps[..n].iter().map(|&(re, im)| Complex64::new(re, im)).collect();
            let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let amplitudes: Vec<Complex64> = raw.iter().map(|c| c / norm).collect();
            let rho0 = DensityMatrix::from_site_amplitudes(n, &amplitudes).unwrap();
            let chain = ChainParams::uniform(n, 1.0, g, gs).with_dephasing(gd);
            let model = Model::new(chain, MotionParams::oscillating(n, a, omega, phi)).unwrap();
            let traj = evolve(&rho0, &model, 2.0, &IntegratorConfig::default()).unwrap();
            let mut sink = 0.0;
            for (_, state) in traj.iter() {
                prop_assert!((state.trace().re - 1.0).abs() < 1e-12);
                prop_assert!(state.trace().im.abs() < 1e-12);
                prop_assert!(state.hermiticity_error() < 1e-14);
                prop_assert!(state.min_eigenvalue() > -1e-8);
                let p = state.population(n + 1);
                prop_assert!(p >= sink - 1e-12);
                sink = p;
            }
        }
    }
}
