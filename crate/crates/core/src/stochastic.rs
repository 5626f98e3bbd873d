//! Ornstein-Uhlenbeck consumption rates, simulated with the exact Gaussian
//! transition. Noise comes from ChaCha20 streams keyed by (seed, path, arc).

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::error::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuParams {
    pub mu: f64,
    pub theta: f64,
    pub sigma: f64,
    pub r0: f64,
}

impl OuParams {
    pub fn new(mu: f64, theta: f64, sigma: f64, r0: f64) -> Self {
        Self { mu, theta, sigma, r0 }
    }

    /// Constant rate `mu`.
    pub fn constant(mu: f64) -> Self {
        Self { mu, theta: 1.0, sigma: 0.0, r0: mu }
    }

    pub fn with_r0(self, r0: f64) -> Self {
        Self { r0, ..self }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.theta > 0.0) || !self.theta.is_finite() {
            return Err(SimError::NonPositiveTheta(self.theta));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(SimError::NegativeSigma(self.sigma));
        }
        if !self.mu.is_finite() || !self.r0.is_finite() {
            return Err(SimError::Invalid("mu and r0 must be finite".into()));
        }
        Ok(())
    }

    /// Mean of `r_t` given `r_0`.
    pub fn mean_at(&self, t: f64) -> f64 {
        let decay = (-self.theta * t).exp();
        self.r0 * decay + self.mu * (1.0 - decay)
    }

    pub fn stationary_variance(&self) -> f64 {
        self.sigma * self.sigma / (2.0 * self.theta)
    }
}

/// One exact transition over `dt` periods with standard normal draw `z`.
pub fn ou_exact_step(r: f64, params: &OuParams, dt: f64, z: f64) -> Result<f64, SimError> {
    if !(params.theta > 0.0) {
        return Err(SimError::NonPositiveTheta(params.theta));
    }
    if !(dt > 0.0) || !z.is_finite() {
        return Err(SimError::Invalid(format!("need dt > 0 and finite z, got dt={dt}, z={z}")));
    }
    let decay = (-params.theta * dt).exp();
    let sd = ((1.0 - (-2.0 * params.theta * dt).exp()) / (2.0 * params.theta)).sqrt();
    Ok(r * decay + params.mu * (1.0 - decay) + params.sigma * z * sd)
}

/// Noise stream for one (path, arc) pair.
pub fn stream_rng(seed: u64, path: usize, arc: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(((path as u64) << 24) | arc as u64);
    rng
}

/// Rates `r[p][t][arc]` for `t = 0..=horizon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathMatrix {
    pub paths: usize,
    pub horizon: usize,
    pub arcs: usize,
    pub seed: u64,
    data: Vec<f64>,
}

impl PathMatrix {
    #[inline]
    pub fn rate(&self, p: usize, t: usize, arc: usize) -> f64 {
        self.data[(p * (self.horizon + 1) + t) * self.arcs + arc]
    }

    pub fn path(&self, p: usize) -> &[f64] {
        let len = (self.horizon + 1) * self.arcs;
        &self.data[p * len..(p + 1) * len]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("path,period,arc,rate\n");
        for p in 0..self.paths {
            for t in 0..=self.horizon {
                for a in 0..self.arcs {
                    let _ = writeln!(s, "{},{},{},{}", p + 1, t, a + 1, self.rate(p, t, a));
                }
            }
        }
        s
    }
}

pub fn simulate_paths(params: &[OuParams], paths: usize, horizon: usize, seed: u64) -> Result<PathMatrix, SimError> {
    if paths < 1 || horizon < 1 {
        return Err(SimError::Invalid("need at least one path and one period".into()));
    }
    for p in params {
        p.validate()?;
    }
    let arcs = params.len();
    let stride = (horizon + 1) * arcs;
    let mut data = vec![0.0; paths * stride];
    data.par_chunks_mut(stride).enumerate().for_each(|(p, block)| {
        for (a, par) in params.iter().enumerate() {
            let mut rng = stream_rng(seed, p, a);
            let mut r = par.r0;
            block[a] = r;
            for t in 1..=horizon {
                let z: f64 = StandardNormal.sample(&mut rng);
                r = ou_exact_step(r, par, 1.0, z).expect("validated parameters");
                block[t * arcs + a] = r;
            }
        }
    });
    Ok(PathMatrix { paths, horizon, arcs, seed, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_without_noise() {
        let p = OuParams::new(0.5, 0.3, 0.0, 0.5);
        for dt in [0.1, 1.0, 7.5] {
            assert_eq!(ou_exact_step(0.5, &p, dt, 1.3).unwrap(), 0.5);
        }
    }

    #[test]
    fn closed_form_value() {
        let p = OuParams::new(0.5, 0.1, 0.1, 0.33);
        let expected = 0.33 * (-0.1f64).exp() + 0.5 * (1.0 - (-0.1f64).exp());
        let got = ou_exact_step(0.33, &p, 1.0, 0.0).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.346178).abs() < 1e-6);
    }

    #[test]
    fn strong_reversion_reaches_mean() {
        let p = OuParams::new(0.5, 60.0, 0.2, 3.0);
        assert!((ou_exact_step(3.0, &p, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_theta() {
        let p = OuParams::new(0.5, 0.0, 0.1, 0.5);
        assert!(matches!(ou_exact_step(0.5, &p, 1.0, 0.0), Err(SimError::NonPositiveTheta(_))));
        assert!(simulate_paths(&[p], 2, 2, 0).is_err());
    }

    #[test]
    fn zero_volatility_paths_coincide() {
        let params = [OuParams::new(0.5, 0.2, 0.0, 0.1), OuParams::new(0.3, 0.5, 0.0, 0.9)];
        let m = simulate_paths(&params, 4, 6, 11).unwrap();
        for p in 1..4 {
            assert_eq!(m.path(p), m.path(0));
        }
        for t in 0..=6 {
            assert!((m.rate(0, t, 0) - params[0].mean_at(t as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let m = simulate_paths(&[OuParams::new(0.5, 0.1, 0.1, 0.5)], 2, 3, 1).unwrap();
        let csv = m.to_csv();
        assert!(csv.starts_with("path,period,arc,rate\n1,0,1,0.5\n"));
        assert_eq!(csv.lines().count(), 1 + 2 * 4);
    }
}
