use genbench_core::analysis::fit_stretched_exponential;
use genbench_core::ansatz::{build_copula, CopulaSpec};
use genbench_core::data::{
    bin_center, discretize, generate_parity_dataset, generate_x_dataset, kl_divergence,
    random_baseline, TransformKind, KL_FLOOR,
};
use genbench_core::noise::NoiseModel;
use genbench_core::optim::cma_es_minimize;
use genbench_core::rng::{child_rng, rng_from_seed};
use genbench_core::sim::{simulate, Circuit};
use genbench_core::trainers::{
    for_each_shifted_pmf, generator_gradient_estimate, pmf_param_shift_grad, run_inference,
    train_qcbm, train_qgan, Backend, Device, GeneratorLoss, MlpDiscriminator, NoClock, QcbmConfig,
    QganConfig,
};
use rand::Rng;

fn copula(n: usize) -> Circuit {
    build_copula(&CopulaSpec::new(n, 1).unwrap()).unwrap()
}

#[test]
fn qcbm_learns_two_qubit_parity() {
    let target = generate_parity_dataset(2, 0).unwrap();
    let cfg = QcbmConfig {
        n_shots: 10_000,
        max_generations: 200,
        seed: 11,
        ..QcbmConfig::default()
    };
    let run = train_qcbm(&copula(2), &target, &cfg, &Device::ideal(), &NoClock).unwrap();
    let last = run.trace.last().unwrap();
    assert!(last.kl_exact < 0.01, "final kl_exact {}", last.kl_exact);
}

#[test]
fn qgan_learns_two_qubit_parity() {
    let target = generate_parity_dataset(2, 0).unwrap();
    let cfg = QganConfig {
        max_epochs: 500,
        seed: 5,
        ..QganConfig::default()
    };
    let run = train_qgan(&copula(2), &target, &cfg, &NoClock).unwrap();
    let last = run.trace.last().unwrap();
    assert!(last.kl_exact < 0.05, "final kl_exact {}", last.kl_exact);
}

#[test]
fn parameter_shift_matches_central_differences() {
    let circuit = copula(4);
    let mut rng = rng_from_seed(4);
    let params: Vec<f64> = (0..circuit.n_params())
        .map(|_| rng.random_range(-3.0..3.0))
        .collect();
    let h = 1e-6;
    let mut worst = 0.0f64;
    for j in 0..circuit.n_params() {
        let shift = pmf_param_shift_grad(&circuit, &params, j, &Device::ideal()).unwrap();
        let mut up = params.clone();
        let mut down = params.clone();
        up[j] += h;
        down[j] -= h;
        let qp = simulate(&circuit, &up).unwrap().exact_pmf();
        let qm = simulate(&circuit, &down).unwrap().exact_pmf();
        for (i, g) in shift.iter().enumerate() {
            worst = worst.max((g - (qp.probs()[i] - qm.probs()[i]) / (2.0 * h)).abs());
        }
    }
    assert!(worst < 1e-6, "max abs error {worst:e}");
}

#[test]
fn generator_estimator_is_unbiased() {
    let circuit = copula(2);
    let target = generate_parity_dataset(2, 0).unwrap();
    let mut rng = rng_from_seed(21);
    let params: Vec<f64> = (0..circuit.n_params())
        .map(|_| rng.random_range(-2.0..2.0))
        .collect();
    let disc = MlpDiscriminator::random(&[32, 16], &mut rng);
    let bits = target.bits_per_dim;

    let loss: Vec<f64> = (0..4)
        .map(|i| disc.neg_log_output(bin_center(i, bits)))
        .collect();
    let mut exact = vec![0.0; circuit.n_params()];
    for_each_shifted_pmf(&circuit, &params, |_, slot, plus, minus| {
        for ((p, m), l) in plus.probs().iter().zip(minus.probs()).zip(&loss) {
            exact[slot] += 0.5 * (p - m) * l;
        }
        Ok(())
    })
    .unwrap();

    let reps = 10_000;
    let mut sum = vec![0.0; exact.len()];
    let mut sum_sq = vec![0.0; exact.len()];
    for _ in 0..reps {
        let g = generator_gradient_estimate(
            GeneratorLoss::NonSaturating,
            &circuit,
            &params,
            &disc,
            bits,
            20,
            &mut rng,
        )
        .unwrap();
        for (k, v) in g.iter().enumerate() {
            sum[k] += v;
            sum_sq[k] += v * v;
        }
    }
    for k in 0..exact.len() {
        let mean = sum[k] / reps as f64;
        let var = (sum_sq[k] / reps as f64 - mean * mean).max(0.0);
        let se = (var / reps as f64).sqrt();
        assert!(
            (mean - exact[k]).abs() <= 3.0 * se + 1e-12,
            "param {k}: {mean} vs {} (se {se})",
            exact[k]
        );
    }
}

#[test]
fn full_depolarization_pins_qcbm_to_random_baseline() {
    let ds = generate_x_dataset(20_000, 0.05, 3);
    let target = discretize(
        &TransformKind::Pit.apply(&ds).unwrap(),
        6,
        TransformKind::Pit,
    )
    .unwrap();
    let device = Device::new(Backend::DensityMatrix, NoiseModel::depolarizing_2q(1.0)).unwrap();
    let cfg = QcbmConfig {
        max_generations: 20,
        seed: 2,
        ..QcbmConfig::default()
    };
    let run = train_qcbm(&copula(6), &target, &cfg, &device, &NoClock).unwrap();
    let baseline = random_baseline(&target.pmf);
    for row in &run.trace.rows {
        assert!(
            (row.kl_exact - baseline).abs() < 0.05,
            "{} vs baseline {baseline}",
            row.kl_exact
        );
    }
}

#[test]
fn shot_objective_converges_like_exact_objective() {
    let ds = generate_x_dataset(20_000, 0.05, 4);
    let target = discretize(
        &TransformKind::Pit.apply(&ds).unwrap(),
        4,
        TransformKind::Pit,
    )
    .unwrap();
    let circuit = copula(4);
    let generations = 300;
    let cfg = QcbmConfig {
        n_shots: 1_000_000,
        max_generations: generations,
        seed: 9,
        ..QcbmConfig::default()
    };
    let shots = train_qcbm(&circuit, &target, &cfg, &Device::ideal(), &NoClock).unwrap();
    let x: Vec<f64> = (1..=generations).map(|g| g as f64).collect();
    let c_shots = fit_stretched_exponential(&x, &shots.trace.kl_exact())
        .unwrap()
        .c_conv;

    let mut init = child_rng(9, &[1]);
    let x0: Vec<f64> = (0..circuit.n_params())
        .map(|_| init.random_range(-0.1..=0.1))
        .collect();
    let exact = cma_es_minimize(
        |theta| {
            let q = simulate(&circuit, theta).unwrap().exact_pmf();
            kl_divergence(&target.pmf, &q, KL_FLOOR).unwrap()
        },
        x0,
        0.5,
        5,
        generations,
        &mut child_rng(9, &[2]),
    )
    .unwrap();
    let c_exact = fit_stretched_exponential(&x, &exact.history)
        .unwrap()
        .c_conv;
    assert!(
        (c_shots - c_exact).abs() < 0.05,
        "shots {c_shots} vs exact {c_exact}"
    );
}

#[test]
fn inference_round_trip_reproduces_training_distribution() {
    let target = generate_parity_dataset(2, 1).unwrap();
    let circuit = copula(2);
    let cfg = QcbmConfig {
        max_generations: 150,
        seed: 1,
        ..QcbmConfig::default()
    };
    let run = train_qcbm(&circuit, &target, &cfg, &Device::ideal(), &NoClock).unwrap();
    let trained = simulate(&circuit, &run.params).unwrap().exact_pmf();
    let hist = run_inference(
        &circuit,
        &run.params,
        100_000,
        &Device::ideal(),
        &mut rng_from_seed(5),
    )
    .unwrap();
    assert!(hist.to_pmf().total_variation(&trained).unwrap() < 0.05);
    assert!(run_inference(
        &circuit,
        &run.params[1..],
        10,
        &Device::ideal(),
        &mut rng_from_seed(5)
    )
    .is_err());
}

#[test]
fn training_is_bitwise_deterministic() {
    let target = generate_parity_dataset(4, 0).unwrap();
    let circuit = copula(4);
    let qcbm = QcbmConfig {
        max_generations: 15,
        seed: 77,
        ..QcbmConfig::default()
    };
    let device = Device::new(Backend::Statevector, NoiseModel::readout(0.05)).unwrap();
    let a = train_qcbm(&circuit, &target, &qcbm, &device, &NoClock).unwrap();
    let b = train_qcbm(&circuit, &target, &qcbm, &device, &NoClock).unwrap();
    assert_eq!(a, b);
    let traj = Device::new(Backend::Trajectory, NoiseModel::depolarizing_2q(0.1)).unwrap();
    let small = QcbmConfig {
        n_shots: 500,
        max_generations: 3,
        ..qcbm
    };
    assert_eq!(
        train_qcbm(&circuit, &target, &small, &traj, &NoClock).unwrap(),
        train_qcbm(&circuit, &target, &small, &traj, &NoClock).unwrap()
    );
    let qgan = QganConfig {
        max_epochs: 20,
        seed: 77,
        ..QganConfig::default()
    };
    assert_eq!(
        train_qgan(&circuit, &target, &qgan, &NoClock).unwrap(),
        train_qgan(&circuit, &target, &qgan, &NoClock).unwrap()
    );
}
