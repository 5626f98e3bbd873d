//! Least-squares properties of the Hermite fit.

use proptest::prelude::*;
use sdairp_core::regression::{fit, hermite_eval, predict};

/// The first six probabilists' Hermite polynomials written out.
fn explicit(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        2 => x * x - 1.0,
        3 => x.powi(3) - 3.0 * x,
        4 => x.powi(4) - 6.0 * x * x + 3.0,
        5 => x.powi(5) - 10.0 * x.powi(3) + 15.0 * x,
        _ => unreachable!(),
    }
}

fn sample() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (8usize..30).prop_flat_map(|n| (prop::collection::vec(-2.0f64..2.0, n), prop::collection::vec(-5.0f64..5.0, n)))
}

proptest! {
    #[test]
    fn recurrence_matches_closed_forms(x in -3.0f64..3.0) {
        for n in 0..=5 {
            prop_assert!((hermite_eval(n, x) - explicit(n, x)).abs() < 1e-9 * (1.0 + explicit(n, x).abs()));
        }
    }

    #[test]
    fn residuals_shrink_with_more_terms((xs, ys) in sample()) {
        let mut prev = f64::INFINITY;
        for m in 0..6 {
            let rss = fit(&xs, &ys, m).residual_sum_of_squares(&ys);
            prop_assert!(rss <= prev + 1e-8 * (1.0 + prev.min(1e12)), "M={} rss {} > {}", m, rss, prev);
            prev = rss;
        }
    }

    #[test]
    fn fitting_fitted_values_is_idempotent((xs, ys) in sample(), m in 1usize..6) {
        let first = fit(&xs, &ys, m);
        let second = fit(&xs, &first.fitted, m);
        for (a, b) in first.fitted.iter().zip(&second.fitted) {
            prop_assert!((a - b).abs() < 1e-6 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn clamped_predictions_stay_in_range((xs, ys) in sample(), x in -3.0f64..3.0, rho in 0.1f64..50.0) {
        let f = fit(&xs, &ys, 4);
        let v = predict(&f, x, Some(rho));
        prop_assert!((0.0..=rho).contains(&v));
    }
}
