mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use qlat_core::models::{build_schwinger, build_thirring, SchwingerParams, ThirringParams};
use qlat_core::thermal::{bloch_propagate, decompose, ensemble_observable, ensemble_trajectory, PureStateEnsemble};
use qlat_core::structure::Propagation;
use qlat_core::{Letter, PauliString, PauliSum};

fn thirring(n: usize, mass: f64) -> PauliSum {
    build_thirring(&ThirringParams { n_sites: n, mass, coupling: 0.7 }).unwrap()
}

/// `Tr(O e^{iH₁t} ρ e^{−iH₁t}) / Tr ρ` with `ρ = e^{−βH₀}` from the spectrum of `H₀`.
fn dense_observable(h0: &PauliSum, beta: f64, h1: &PauliSum, o: &PauliSum, t: f64) -> f64 {
    let (e, v) = eigh(&sum_matrix(h0));
    let w = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(e.len(), e.iter().map(|x| c((-beta * x).exp(), 0.0))));
    let rho = &v * w * v.adjoint();
    let u = expm_taylor(&sum_matrix(h1), t);
    let evolved = &u * &rho * u.adjoint();
    ((sum_matrix(o) * evolved).trace() / rho.trace()).re
}

fn z_site(n: usize, j: usize) -> PauliSum {
    let mut o = PauliSum::new(n);
    o.add(1.0, PauliString::single(n, j, Letter::Z).unwrap()).unwrap();
    o
}

#[test]
fn trace_is_partition_function() {
    let h = thirring(6, 0.4);
    let ts = bloch_propagate(&h, 0.9, 4).unwrap();
    let z: f64 = eigh(&sum_matrix(&h)).0.iter().map(|e| (-0.9 * e).exp()).sum();
    assert!((ts.trace() - z).abs() < 1e-10 * z);
}

#[test]
fn bloch_result_is_matrix_exponential() {
    let h = thirring(4, -0.3);
    for steps in [1, 3, 20] {
        let ts = bloch_propagate(&h, 1.5, steps).unwrap();
        let rho_exact = {
            let (e, v) = eigh(&sum_matrix(&h));
            let d = DMatrix::from_fn(e.len(), e.len(), |i, j| if i == j { c((-1.5 * e[i]).exp(), 0.0) } else { c(0.0, 0.0) });
            &v * d * v.adjoint()
        };
        assert!(max_abs(&(ts.rho() - rho_exact)) < 1e-10);
        let comm = sum_matrix(&h) * ts.rho() - ts.rho() * sum_matrix(&h);
        assert!(max_abs(&comm) < 1e-10);
        assert!(max_abs(&(ts.rho() - ts.rho().adjoint())) < 1e-12);
    }
}

#[test]
fn low_temperature_limit_is_ground_projector() {
    let h = thirring(4, 1.0);
    let (e, v) = eigh(&sum_matrix(&h));
    let gap = e[1] - e[0];
    assert!(gap > 1e-3);
    let ts = bloch_propagate(&h, 40.0 / gap, 10).unwrap();
    let rho = ts.rho() / c(ts.trace(), 0.0);
    let g = v.column(0).into_owned();
    let fidelity = (g.adjoint() * &rho * &g)[0].re;
    assert!(fidelity >= 1.0 - 1e-8);
}

#[test]
fn exact_ensemble_matches_dense_after_quench() {
    let n = 4;
    let h0 = thirring(n, 0.8);
    let h1 = thirring(n, -0.5);
    let beta = 0.7;
    let ens = decompose(&bloch_propagate(&h0, beta, 2).unwrap(), 0.0);
    let o = z_site(n, 1);
    let times: Vec<f64> = (0..=10).map(|k| 0.5 * k as f64).collect();
    let got = ensemble_trajectory(&ens, &h1, &o, &times, Propagation::Exact).unwrap();
    for (t, g) in times.iter().zip(got) {
        assert!((g - dense_observable(&h0, beta, &h1, &o, *t)).abs() < 1e-10, "t={t}");
    }
    let e1 = ensemble_observable(&ens, &h1, &h1, 0.0).unwrap();
    assert!((e1 - dense_observable(&h0, beta, &h1, &h1, 0.0)).abs() < 1e-10);
}

#[test]
fn equilibrium_quench_is_stationary() {
    let n = 4;
    let h0 = thirring(n, 0.5);
    let ens = decompose(&bloch_propagate(&h0, 1.1, 1).unwrap(), 0.0);
    let times = [0.0, 0.8, 2.5, 5.0];
    let values = ensemble_trajectory(&ens, &h0, &h0, &times, Propagation::Exact).unwrap();
    assert!(values.iter().all(|v| (v - values[0]).abs() < 1e-9));
}

#[test]
fn observable_is_linear_and_order_independent() {
    let n = 4;
    let h0 = build_schwinger(&SchwingerParams::new(n, 0.3)).unwrap();
    let h1 = build_schwinger(&SchwingerParams::new(n, -0.6)).unwrap();
    let ens = decompose(&bloch_propagate(&h0, 0.5, 1).unwrap(), 1e-3);
    let (a, b) = (z_site(n, 0), z_site(n, 2));
    let mut combo = a.scaled(2.0);
    combo.add_sum(&b, -0.5).unwrap();
    let f = |o: &PauliSum, e: &PureStateEnsemble| ensemble_observable(e, &h1, o, 1.3).unwrap();
    assert!((f(&combo, &ens) - (2.0 * f(&a, &ens) - 0.5 * f(&b, &ens))).abs() < 1e-12);

    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut shuffled = ens.clone();
    shuffled.entries.shuffle(&mut rand::rngs::StdRng::seed_from_u64(4));
    assert!((f(&a, &shuffled) - f(&a, &ens)).abs() < 1e-12);
}

#[test]
fn truncated_ensemble_converges_as_threshold_falls() {
    let n = 4;
    let h0 = thirring(n, 0.8);
    let h1 = thirring(n, -0.5);
    let ts = bloch_propagate(&h0, 0.7, 2).unwrap();
    let o = z_site(n, 2);
    let exact = dense_observable(&h0, 0.7, &h1, &o, 2.0);
    let errors: Vec<f64> = [1e-1, 1e-3, 1e-6, 0.0]
        .iter()
        .map(|&th| (ensemble_observable(&decompose(&ts, th), &h1, &o, 2.0).unwrap() - exact).abs())
        .collect();
    assert!(errors[3] < 1e-10, "{errors:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reconstruction_error_shrinks_with_threshold(
        coeffs in proptest::collection::vec(-1.0f64..1.0, 12),
        beta in 0.1f64..2.0,
    ) {
        // random 5-qubit Hamiltonian from fixed strings with random weights
        let strings = ["XXIII", "IYYII", "IIZZI", "IIIXX", "ZIIIZ", "XIZIY", "ZIIII", "IZIII", "IIXII", "IIIYI", "IIIIZ", "YXIZI"];
        let mut h = PauliSum::new(5);
        for (w, s) in coeffs.iter().zip(strings) {
            h.add(*w, s.parse().unwrap()).unwrap();
        }
        let ts = bloch_propagate(&h, beta, 1).unwrap();
        let mut previous = f64::INFINITY;
        for th in [1.0, 0.3, 0.1, 0.03, 0.01, 1e-3, 0.0] {
            let e = decompose(&ts, th);
            prop_assert!(e.entries.iter().all(|p| p.weight.norm() > th));
            let err = (ts.rho() - e.reconstruct()).norm();
            prop_assert!(err <= previous + 1e-12);
            previous = err;
        }
        prop_assert!(previous == 0.0);
    }
}
