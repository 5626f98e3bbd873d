//! Probabilist's Hermite basis and minimum-norm least squares.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// `He_n(x)` by the three-term recurrence.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `[He_0(x), ..., He_m(x)]`.
pub fn hermite_row(m: usize, x: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(m + 1);
    row.push(1.0);
    if m >= 1 {
        row.push(x);
    }
    for k in 1..m {
        row.push(x * row[k] - k as f64 * row[k - 1]);
    }
    row
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub m: usize,
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    pub rank: usize,
    /// Ratio of largest to smallest retained singular value.
    pub condition: f64,
}

impl FitResult {
    pub fn zero(m: usize) -> Self {
        Self { m, coefficients: vec![0.0; m + 1], fitted: Vec::new(), rank: 0, condition: 1.0 }
    }

    pub fn residual_sum_of_squares(&self, ys: &[f64]) -> f64 {
        self.fitted.iter().zip(ys).map(|(f, y)| (f - y).powi(2)).sum()
    }
}

/// Least squares on the `m + 1` Hermite columns. Singular values below
/// `max(rows, cols) * eps * s_max` are dropped, giving the minimum-norm
/// solution.
pub fn fit(xs: &[f64], ys: &[f64], m: usize) -> FitResult {
    assert_eq!(xs.len(), ys.len(), "fit needs one target per input");
    assert!(!xs.is_empty(), "fit needs at least one observation");
    let rows = xs.len();
    let cols = m + 1;
    let a = DMatrix::from_fn(rows, cols, |i, j| hermite_eval(j, xs[i]));
    let b = DVector::from_column_slice(ys);
    let svd = a.clone().svd(true, true);
    let s_max = svd.singular_values.max();
    let tol = rows.max(cols) as f64 * f64::EPSILON * s_max;
    let kept: Vec<f64> = svd.singular_values.iter().copied().filter(|&s| s > tol).collect();
    let rank = kept.len();
    let condition = match kept.iter().copied().reduce(f64::min) {
        Some(s_min) if s_min > 0.0 => s_max / s_min,
        _ => f64::INFINITY,
    };
    let beta = if rank == 0 { DVector::zeros(cols) } else { svd.solve(&b, tol).expect("both factors were computed") };
    let fitted = (&a * &beta).iter().copied().collect();
    FitResult { m, coefficients: beta.iter().copied().collect(), fitted, rank, condition }
}

/// `β · He(x)`, clamped to `[0, rho]` when a bound is given.
pub fn predict(fit: &FitResult, x: f64, clamp: Option<f64>) -> f64 {
    let raw: f64 = hermite_row(fit.m, x).iter().zip(&fit.coefficients).map(|(h, b)| h * b).sum();
    match clamp {
        Some(rho) => raw.clamp(0.0, rho),
        None => raw,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        for i in -30..=30 {
            let x = i as f64 / 10.0;
            assert_eq!(hermite_eval(0, x), 1.0);
            assert!((hermite_eval(2, x) - (x * x - 1.0)).abs() < 1e-12);
            assert!((hermite_eval(3, x) - (x.powi(3) - 3.0 * x)).abs() < 1e-12);
            assert!((hermite_eval(4, x) - (x.powi(4) - 6.0 * x * x + 3.0)).abs() < 1e-11);
            assert!((hermite_eval(5, x) - (x.powi(5) - 10.0 * x.powi(3) + 15.0 * x)).abs() < 1e-10);
            let row = hermite_row(7, x);
            for (n, v) in row.iter().enumerate() {
                assert!((v - hermite_eval(n, x)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_targets_fit_zero() {
        let f = fit(&[0.1, 0.5, 0.9], &[0.0; 3], 4);
        assert!(f.fitted.iter().all(|v| *v == 0.0));
        assert_eq!(predict(&f, 0.3, None), 0.0);
    }

    #[test]
    fn identical_inputs_fit_the_mean() {
        let f = fit(&[0.4; 5], &[0.0, 10.0, 0.0, 10.0, 0.0], 5);
        assert_eq!(f.rank, 1);
        for v in &f.fitted {
            assert!((v - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn clamp_bounds() {
        let f = FitResult { m: 1, coefficients: vec![5.0, -20.0], fitted: vec![], rank: 2, condition: 1.0 };
        assert_eq!(predict(&f, 1.0, Some(10.0)), 0.0);
        assert_eq!(predict(&f, -1.0, Some(10.0)), 10.0);
        assert_eq!(predict(&f, -1.0, None), 25.0);
    }
}
