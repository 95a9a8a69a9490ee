//! Cross-backend agreement and an independent dense Kraus-sum oracle for
//! the density-matrix channels.

mod common;

use common::oracle::{max_oracle_error, oracle};
use common::random_circuit;
use genbench_core::noise::{confusion_matrix_pmf, NoiseModel};
use genbench_core::rng::rng_from_seed;
use genbench_core::sim::{dm_simulate, sample_trajectories, simulate, Circuit, GateOp, Pmf};
use genbench_core::C64;
use proptest::prelude::*;

#[test]
fn depolarizing_matches_pauli_kraus_oracle() {
    let mut rng = rng_from_seed(61);
    let noise = NoiseModel::depolarizing_2q(0.2);
    for n in [2, 3] {
        for _ in 0..10 {
            let (circuit, params) = random_circuit(n, 12, &mut rng);
            let err = max_oracle_error(&circuit, &params, &noise);
            assert!(err < 1e-10, "n = {n}: max error {err:e}");
        }
    }
}

#[test]
fn every_channel_matches_kraus_oracle() {
    let mut rng = rng_from_seed(62);
    let noise = NoiseModel {
        p_depol_2q: 0.15,
        p_depol_1q: 0.05,
        amp_damping: 0.08,
        phase_damping: 0.12,
        ..NoiseModel::ideal()
    };
    for _ in 0..10 {
        let (circuit, params) = random_circuit(3, 12, &mut rng);
        assert!(max_oracle_error(&circuit, &params, &noise) < 1e-10);
    }
}

#[test]
fn oracle_gates_agree_with_statevector() {
    // Guards the oracle itself: noise-free, its diagonal must be the Born PMF.
    let mut rng = rng_from_seed(63);
    let (circuit, params) = random_circuit(3, 15, &mut rng);
    let rho = oracle(&circuit, &params, &NoiseModel::ideal());
    let sv = simulate(&circuit, &params).unwrap().exact_pmf();
    for (i, p) in sv.probs().iter().enumerate() {
        assert!((rho[i][i].re - p).abs() < 1e-12);
    }
}

fn trajectory_tv(circuit: &Circuit, params: &[f64], noise: &NoiseModel, seed: u64) -> f64 {
    let exact = dm_simulate(circuit, params, noise).unwrap().diagonal();
    let exact = confusion_matrix_pmf(&exact, noise.p01, noise.p10).unwrap();
    let hist =
        sample_trajectories(circuit, params, noise, 100_000, &mut rng_from_seed(seed)).unwrap();
    hist.to_pmf().total_variation(&exact).unwrap()
}

#[test]
fn trajectories_match_density_matrix_with_depolarizing_and_readout() {
    let mut rng = rng_from_seed(64);
    let noise = NoiseModel {
        p_depol_2q: 0.2,
        ..NoiseModel::readout(0.1)
    };
    for (k, n) in [2, 3, 2, 3].into_iter().enumerate() {
        let (circuit, params) = random_circuit(n, 10, &mut rng);
        let tv = trajectory_tv(&circuit, &params, &noise, k as u64);
        assert!(tv < 0.01, "n = {n}: TV {tv}");
    }
}

#[test]
fn trajectories_match_density_matrix_with_damping() {
    let mut rng = rng_from_seed(65);
    let noise = NoiseModel {
        p_depol_1q: 0.05,
        amp_damping: 0.1,
        phase_damping: 0.1,
        ..NoiseModel::ideal()
    };
    let (circuit, params) = random_circuit(3, 10, &mut rng);
    assert!(trajectory_tv(&circuit, &params, &noise, 7) < 0.01);
}

#[test]
fn readout_flips_match_confusion_matrix() {
    let circuit = Circuit::from_gates(2, [GateOp::h(0), GateOp::cx(0, 1)]).unwrap();
    let noise = NoiseModel {
        p01: 0.07,
        p10: 0.13,
        ..NoiseModel::ideal()
    };
    assert!(trajectory_tv(&circuit, &[], &noise, 3) < 0.01);
}

#[test]
fn shot_frequency_variance_matches_binomial() {
    let pmf = Pmf::new(vec![0.05, 0.15, 0.3, 0.5]).unwrap();
    let (reps, n_shots) = (200, 1000u64);
    let mut rng = rng_from_seed(66);
    let samples: Vec<Pmf> = (0..reps)
        .map(|_| pmf.sample_shots(n_shots, &mut rng).unwrap().to_pmf())
        .collect();
    for (i, &p) in pmf.probs().iter().enumerate() {
        let mean = samples.iter().map(|s| s.probs()[i]).sum::<f64>() / reps as f64;
        let var = samples
            .iter()
            .map(|s| (s.probs()[i] - mean).powi(2))
            .sum::<f64>()
            / (reps - 1) as f64;
        let ratio = var / (p * (1.0 - p) / n_shots as f64);
        assert!(
            (0.5..=2.0).contains(&ratio),
            "bin {i}: variance ratio {ratio}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_is_preserved(seed in any::<u64>(), n in 1usize..6, len in 0usize..40) {
        let (circuit, params) = random_circuit(n, len, &mut rng_from_seed(seed));
        let sv = simulate(&circuit, &params).unwrap();
        prop_assert!((sv.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn noise_free_backends_agree(seed in any::<u64>(), n in 2usize..5) {
        let (circuit, params) = random_circuit(n, 15, &mut rng_from_seed(seed));
        let sv = simulate(&circuit, &params).unwrap().exact_pmf();
        let dm = dm_simulate(&circuit, &params, &NoiseModel::ideal()).unwrap().diagonal();
        for (a, b) in sv.probs().iter().zip(dm.probs()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        let hist = sample_trajectories(&circuit, &params, &NoiseModel::ideal(), 100_000, &mut rng_from_seed(seed ^ 1)).unwrap();
        prop_assert!(hist.to_pmf().total_variation(&sv).unwrap() < 0.01);
    }

    #[test]
    fn density_matrix_stays_physical(seed in any::<u64>(), p in 0.0f64..1.0, g in 0.0f64..1.0) {
        let (circuit, params) = random_circuit(3, 12, &mut rng_from_seed(seed));
        let noise = NoiseModel { p_depol_2q: p, amp_damping: g * 0.5, phase_damping: g, ..NoiseModel::readout(0.0) };
        let rho = dm_simulate(&circuit, &params, &noise).unwrap();
        prop_assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-9);
        prop_assert!(rho.max_hermitian_defect() < 1e-9);
        prop_assert!(rho.min_eigenvalue() > -1e-8);
    }

    #[test]
    fn confusion_matrix_is_linear_and_normalizing(
        w1 in proptest::collection::vec(0.0f64..1.0, 8),
        w2 in proptest::collection::vec(0.0f64..1.0, 8),
        t in 0.0f64..1.0, p01 in 0.0f64..1.0, p10 in 0.0f64..1.0,
    ) {
        prop_assume!(w1.iter().sum::<f64>() > 1e-3 && w2.iter().sum::<f64>() > 1e-3);
        let a = Pmf::from_weights(w1).unwrap();
        let b = Pmf::from_weights(w2).unwrap();
        let mix = Pmf::new(a.probs().iter().zip(b.probs()).map(|(x, y)| t * x + (1.0 - t) * y).collect()).unwrap();
        let ca = confusion_matrix_pmf(&a, p01, p10).unwrap();
        let cb = confusion_matrix_pmf(&b, p01, p10).unwrap();
        let cm = confusion_matrix_pmf(&mix, p01, p10).unwrap();
        prop_assert!((cm.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in 0..8 {
            prop_assert!((cm.probs()[i] - (t * ca.probs()[i] + (1.0 - t) * cb.probs()[i])).abs() < 1e-12);
        }
    }
}
