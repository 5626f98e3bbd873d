//! Sample moments of simulated rates against the analytic transition law.

use proptest::prelude::*;
use sdairp_core::stochastic::{ou_exact_step, simulate_paths, OuParams};

#[test]
fn means_and_long_run_variance() {
    let params = OuParams::new(0.5, 0.1, 0.1, 0.33);
    let (paths, horizon) = (10_000, 60);
    let sim = simulate_paths(&[params], paths, horizon, 11).unwrap();
    let n = paths as f64;
    for t in 1..=horizon {
        let xs: Vec<f64> = (0..paths).map(|p| sim.rate(p, t, 0)).collect();
        let mean = xs.iter().sum::<f64>() / n;
        let var_t = params.stationary_variance() * (1.0 - (-2.0 * params.theta * t as f64).exp());
        let se = (var_t / n).sqrt();
        assert!(
            (mean - params.mean_at(t as f64)).abs() < 3.0 * se,
            "period {t}: {mean} vs {}",
            params.mean_at(t as f64)
        );
    }
    let last: Vec<f64> = (0..paths).map(|p| sim.rate(p, horizon, 0)).collect();
    let mean = last.iter().sum::<f64>() / n;
    let var = last.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let target = params.stationary_variance();
    let se = target * (2.0 / (n - 1.0)).sqrt();
    assert!((var - target).abs() < 3.0 * se, "variance {var} vs {target}");
}

#[test]
fn thread_count_does_not_change_paths() {
    let params = [OuParams::new(0.4, 0.2, 0.05, 0.4), OuParams::new(0.1, 0.3, 0.02, 0.2)];
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| simulate_paths(&params, 64, 6, 99).unwrap())
    };
    assert_eq!(run(1), run(4));
}

proptest! {
    #[test]
    fn zero_noise_follows_mean_curve(mu in 0.0f64..1.0, theta in 0.01f64..2.0, r0 in 0.0f64..1.0, horizon in 1usize..12) {
        let params = OuParams::new(mu, theta, 0.0, r0);
        let sim = simulate_paths(&[params], 2, horizon, 3).unwrap();
        for t in 0..=horizon {
            prop_assert!((sim.rate(1, t, 0) - params.mean_at(t as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_is_a_fixed_point(mu in -1.0f64..1.0, theta in 0.01f64..2.0, dt in 0.1f64..5.0) {
        let params = OuParams::new(mu, theta, 0.0, mu);
        prop_assert!((ou_exact_step(mu, &params, dt, 0.7).unwrap() - mu).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_paths(seed in any::<u64>()) {
        let params = [OuParams::new(0.5, 0.1, 0.1, 0.5)];
        let a = simulate_paths(&params, 4, 3, seed).unwrap();
        let b = simulate_paths(&params, 4, 3, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
