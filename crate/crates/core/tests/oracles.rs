//! Closed-form and independent-solver checks of both engines.

use approx::assert_relative_eq;
use nalgebra::DMatrix;
use rydsim_core::classical::{
    evolve_classical_exact, rate_from_mismatch, transition_rate, ProbabilityVector, RateGenerator,
};
use rydsim_core::quantum::{evolve_quantum, evolve_quantum_with, DensityMatrix, Hamiltonian};
use rydsim_core::{
    AtomNetwork, Configuration, DetuningSchedule, Observables, SimParams, StepOptions,
};

fn single_atom(delta: f64) -> AtomNetwork {
    AtomNetwork::new(vec![[0.0; 3]], vec![delta], 10.0).unwrap()
}

#[test]
fn far_apart_pair_spectrum() {
    let net = AtomNetwork::new(vec![[0.0; 3], [1e3, 0.0, 0.0]], vec![0.0, 0.0], 10.0).unwrap();
    let ham = Hamiltonian::build(&net, net.static_detunings(), 1.0).unwrap();
    let m = DMatrix::from_row_slice(4, 4, &ham.to_dense());
    let mut eig: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    for (got, want) in eig.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
        assert!((got - want).abs() < 1e-9, "{eig:?}");
    }
}

#[test]
fn blockaded_pair_spectrum() {
    // With a huge pair shift the doubly excited state decouples and the
    // rest is a three-level system with eigenvalues 0, ±√2 Ω.
    let net = AtomNetwork::new(vec![[0.0; 3], [0.1, 0.0, 0.0]], vec![0.0, 0.0], 10.0).unwrap();
    let ham = Hamiltonian::build(&net, net.static_detunings(), 1.0).unwrap();
    let m = DMatrix::from_row_slice(4, 4, &ham.to_dense());
    let mut eig: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    let s2 = 2f64.sqrt();
    for (got, want) in eig[..3].iter().zip([-s2, 0.0, s2]) {
        assert!((got - want).abs() < 1e-6, "{eig:?}");
    }
}

#[test]
fn rabi_oscillation() {
    let net = single_atom(0.0);
    let params = SimParams::dimensionless(0.0, 0.0).unwrap();
    let rho0 = DensityMatrix::from_configuration(&Configuration::ground(1)).unwrap();
    let out = evolve_quantum(
        &net,
        &DetuningSchedule::empty(),
        &params,
        &rho0,
        std::f64::consts::TAU,
        &StepOptions::for_omega(1.0),
        &Observables::all_sites(1, vec![0]),
    )
    .unwrap();
    for (t, n) in out.times.iter().zip(&out.output) {
        let exact = t.sin().powi(2);
        assert!((n - exact).abs() < 1e-6, "t={t}: {n} vs {exact}");
    }
}

#[test]
fn detuned_rabi_amplitude() {
    // Generalized Rabi: max excitation 4Ω²/(Δ² + 4Ω²) with H = Δn + Ωσx.
    let delta = 3.0;
    let net = single_atom(delta);
    let params = SimParams::dimensionless(0.0, 0.0).unwrap();
    let rho0 = DensityMatrix::from_configuration(&Configuration::ground(1)).unwrap();
    let out = evolve_quantum(
        &net,
        &DetuningSchedule::empty(),
        &params,
        &rho0,
        10.0,
        &StepOptions::for_omega(1.0).with_samples(2001),
        &Observables::output_only(vec![0]),
    )
    .unwrap();
    let peak = out.output.iter().copied().fold(0.0, f64::max);
    assert_relative_eq!(peak, 4.0 / (delta * delta + 4.0), epsilon = 1e-4);
}

#[test]
fn dephasing_drives_to_half_and_purity_falls() {
    let net = single_atom(0.0);
    let params = SimParams::dimensionless(1.0, 0.0).unwrap();
    let rho0 = DensityMatrix::from_configuration(&Configuration::ground(1)).unwrap();
    let mut purity = Vec::new();
    let out = evolve_quantum_with(
        &net,
        &DetuningSchedule::empty(),
        &params,
        &rho0,
        100.0,
        &StepOptions::for_omega(1.0),
        &Observables::output_only(vec![0]),
        |rho| purity.push(rho.purity()),
    )
    .unwrap();
    assert_relative_eq!(*out.output.last().unwrap(), 0.5, epsilon = 1e-6);
    assert!(purity.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert_relative_eq!(*purity.last().unwrap(), 0.5, epsilon = 1e-6);
}

#[test]
fn decay_only_empties_excited_state() {
    let net = single_atom(1e4);
    let params = SimParams::dimensionless(0.0, 0.5).unwrap();
    let rho0 = DensityMatrix::from_configuration(&Configuration::from_bits(vec![true])).unwrap();
    let out = evolve_quantum(
        &net,
        &DetuningSchedule::empty(),
        &params,
        &rho0,
        4.0,
        &StepOptions::for_omega(1.0).with_dt(1e-4),
        &Observables::output_only(vec![0]),
    )
    .unwrap();
    // A far-detuned drive leaves residual mixing of order (Ω/Δ)².
    for (t, n) in out.times.iter().zip(&out.output) {
        assert!((n - (-0.5 * t).exp()).abs() < 1e-6, "t={t}");
    }
}

#[test]
fn permutation_covariance() {
    let net = AtomNetwork::new(
        vec![[0.0; 3], [1.0, 0.0, 0.0], [1.6, 0.7, 0.0]],
        vec![-10.0, -3.0, 2.0],
        10.0,
    )
    .unwrap();
    let perm = [2, 0, 1];
    let params = SimParams::dimensionless(0.7, 0.05).unwrap();
    let c0 = Configuration::from_bits(vec![true, false, false]);
    let opts = StepOptions::for_omega(1.0).with_samples(21);
    let obs = Observables::all_sites(3, vec![0]);
    let mut finals = Vec::new();
    for (network, rho0) in [
        (net.clone(), DensityMatrix::from_configuration(&c0).unwrap()),
        (
            net.permuted(&perm).unwrap(),
            DensityMatrix::from_configuration(&c0)
                .unwrap()
                .permuted(&perm)
                .unwrap(),
        ),
    ] {
        let mut last = None;
        evolve_quantum_with(
            &network,
            &DetuningSchedule::empty(),
            &params,
            &rho0,
            2.0,
            &opts,
            &obs,
            |r| last = Some(r.clone()),
        )
        .unwrap();
        finals.push(last.unwrap());
    }
    let mapped = finals[0].permuted(&perm).unwrap();
    for (a, b) in mapped.as_slice().iter().zip(finals[1].as_slice()) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn rate_formula_values() {
    assert_relative_eq!(rate_from_mismatch(0.0, 1.0, 2.0), 2.0);
    assert_relative_eq!(rate_from_mismatch(1.0, 1.0, 2.0), 1.0);
    assert_relative_eq!(rate_from_mismatch(0.0, 2.0, 10.0), 4.0 * 4.0 / 10.0);
}

#[test]
fn facilitated_neighbor_is_resonant() {
    // Δ = -C6/r^6 at r = 1: an excited neighbor cancels the detuning.
    let net = AtomNetwork::new(vec![[0.0; 3], [1.0, 0.0, 0.0]], vec![-10.0, -10.0], 10.0).unwrap();
    let params = SimParams::dimensionless(1.0, 0.0).unwrap();
    let excited = Configuration::from_bits(vec![true, false]);
    let ground = Configuration::ground(2);
    let on = transition_rate(1, &excited, &net, &params).unwrap();
    let off = transition_rate(1, &ground, &net, &params).unwrap();
    assert_relative_eq!(on, 4.0, epsilon = 1e-12);
    assert_relative_eq!(off, 1.0 / (0.25 + 100.0), epsilon = 1e-12);
}

#[test]
fn two_state_relaxation_closed_form() {
    let (gamma, kappa) = (2.0, 0.3);
    let net = single_atom(0.4);
    let params = SimParams::dimensionless(gamma, kappa).unwrap();
    let g = rate_from_mismatch(0.4, 1.0, gamma);
    let s = 2.0 * g + kappa;
    let out = evolve_classical_exact(
        &net,
        &DetuningSchedule::empty(),
        &params,
        &ProbabilityVector::from_configuration(&Configuration::ground(1)).unwrap(),
        5.0,
        &StepOptions::for_omega(1.0),
        &Observables::output_only(vec![0]),
    )
    .unwrap();
    for (t, n) in out.times.iter().zip(&out.output) {
        let exact = g / s * (1.0 - (-s * t).exp());
        assert!((n - exact).abs() < 1e-8, "t={t}");
    }
}

#[test]
fn exact_propagator_matches_matrix_exponential() {
    let net = AtomNetwork::new(
        vec![[0.0; 3], [1.0, 0.0, 0.0], [2.1, 0.0, 0.0]],
        vec![-10.0, -10.0, -8.0],
        10.0,
    )
    .unwrap();
    let params = SimParams::dimensionless(1.0, 0.05).unwrap();
    let generator = RateGenerator::build(&net, &params, net.static_detunings()).unwrap();
    let g = DMatrix::from_row_slice(8, 8, &generator.to_dense());
    // exp(G t) by scaling and squaring of a truncated Taylor series.
    let t = 1.5;
    let small = &g * (t / 1024.0);
    let mut term = DMatrix::<f64>::identity(8, 8);
    let mut expm = DMatrix::<f64>::identity(8, 8);
    for k in 1..20 {
        term = &term * &small / k as f64;
        expm += &term;
    }
    for _ in 0..10 {
        expm = &expm * &expm;
    }
    let c0 = Configuration::from_bits(vec![true, false, false]);
    let mut p = ProbabilityVector::from_configuration(&c0).unwrap();
    p.propagate(&generator, t, 0.001).unwrap();
    let col = expm.column(c0.to_index());
    for (a, b) in p.as_slice().iter().zip(col.iter()) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}
