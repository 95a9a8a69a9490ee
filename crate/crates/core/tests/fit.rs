use genbench_core::analysis::fit_stretched_exponential;
use genbench_core::rng::rng_from_seed;
use proptest::prelude::*;
use rand::Rng;

fn log_grid(n: usize, hi: f64) -> Vec<f64> {
    (0..n).map(|i| hi.powf(i as f64 / (n - 1) as f64)).collect()
}

fn synth(p: [f64; 4], x: &[f64]) -> Vec<f64> {
    let [a, b, g, c] = p;
    x.iter().map(|&v| a * (-b * v.powf(g)).exp() + c).collect()
}

/// Draws from the documented recovery domain: γ ∈ [0.3, 1.2],
/// β·x_max^γ ∈ [2, 20] (log-uniform), α ∈ [0.5, 3], C ∈ [0.05, 1].
fn draw(rng: &mut impl Rng, x_max: f64) -> [f64; 4] {
    let gamma = rng.random_range(0.3..1.2);
    let rate = (rng.random_range(2f64.ln()..20f64.ln())).exp();
    [
        rng.random_range(0.5..3.0),
        rate / x_max.powf(gamma),
        gamma,
        rng.random_range(0.05..1.0),
    ]
}

#[test]
fn recovers_random_draws_within_one_percent() {
    let x = log_grid(100, 1e4);
    let mut rng = rng_from_seed(9);
    for _ in 0..20 {
        let p = draw(&mut rng, 1e4);
        let f = fit_stretched_exponential(&x, &synth(p, &x)).unwrap();
        for (got, want) in [f.alpha, f.beta, f.gamma, f.c_conv].into_iter().zip(p) {
            assert!((got - want).abs() <= 0.01 * want, "truth {p:?}, fit {f:?}");
        }
        assert!(f.residual_rms < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rescaling_x_rescales_beta_only(seed in any::<u64>(), k in 0.01f64..100.0) {
        let x = log_grid(60, 1e4);
        let p = draw(&mut rng_from_seed(seed), 1e4);
        let y = synth(p, &x);
        let f = fit_stretched_exponential(&x, &y).unwrap();
        let xs: Vec<f64> = x.iter().map(|v| v * k).collect();
        let g = fit_stretched_exponential(&xs, &y).unwrap();
        let beta_pred = f.beta * k.powf(-f.gamma);
        prop_assert!((g.beta - beta_pred).abs() <= 0.01 * beta_pred);
        prop_assert!((g.gamma - f.gamma).abs() <= 0.01 * f.gamma);
        prop_assert!((g.alpha - f.alpha).abs() <= 0.01 * f.alpha.abs());
        prop_assert!((g.c_conv - f.c_conv).abs() <= 0.01 * f.c_conv);
    }
}
