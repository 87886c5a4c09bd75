//! Compound-Poisson driven stochastic integrals.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::measures::sampling::{open_uniform, sample_with};
use crate::measures::{Distribution, Kernel};

/// Share of `int f^alpha` allowed outside the default horizon.
pub const DEFAULT_HORIZON_FRACTION: f64 = 1e-4;

/// A compound-Poisson Levy process: jumps of law `jump` at rate `intensity`,
/// no drift and no Gaussian part. Its Levy measure is `intensity * law(jump)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyModel {
    pub jump: Distribution,
    pub intensity: f64,
}

impl LevyModel {
    pub fn new(jump: Distribution, intensity: f64) -> Result<Self> {
        let m = LevyModel { jump, intensity };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        self.jump.validate()?;
        if !(self.intensity > 0.0 && self.intensity.is_finite()) {
            return Err(invalid(format!("intensity must be positive, got {}", self.intensity)));
        }
        Ok(())
    }

    /// `eta(x, inf)`.
    pub fn levy_tail(&self, x: f64) -> f64 {
        self.intensity * self.jump.tail(x)
    }
}

/// Smallest horizon (up to doubling then bisection) leaving at most
/// [`DEFAULT_HORIZON_FRACTION`] of `int f^alpha` outside `[-h, h]`.
pub fn default_horizon(kernel: &Kernel, alpha: f64) -> f64 {
    let (_, hi) = kernel.support();
    if hi.is_finite() && matches!(kernel, Kernel::Step { .. }) {
        return hi;
    }
    let total = kernel.power_integral(alpha);
    let frac = |h: f64| kernel.power_integral_outside(alpha, h) / total;
    let mut hi = 1.0;
    while frac(hi) > DEFAULT_HORIZON_FRACTION {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if frac(mid) > DEFAULT_HORIZON_FRACTION {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// `n` draws of `sum_k f(s_k) J_k` over the arrivals `s_k` of a rate-
/// `intensity` Poisson process on `support(f)` intersected with `[-h, h]`.
pub fn sample_integral(kernel: &Kernel, levy: &LevyModel, h: f64, n: usize, seed: u64) -> Vec<f64> {
    let (lo, hi) = kernel.support();
    let (lo, hi) = (lo.max(-h), hi.min(h));
    let rate = levy.intensity;
    sample_with(n, seed, |rng| {
        let mut x = 0.0;
        let mut s = lo;
        loop {
            s += -open_uniform(rng).ln() / rate;
            if s >= hi {
                break;
            }
            x += kernel.value(s) * levy.jump.draw(open_uniform(rng));
        }
        x
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_meets_fraction() {
        let k = Kernel::Exp { lambda: 1.0 };
        let h = default_horizon(&k, 1.0);
        assert!((h - (1e4f64).ln()).abs() < 1e-9);
        let k = Kernel::Step { pieces: vec![(0.5, 1.0), (1.0, 2.0)] };
        assert_eq!(default_horizon(&k, 1.0), 3.0);
    }

    #[test]
    fn arrival_count_is_poisson() {
        // unit jumps on a unit step of length 2 at rate 3: X counts arrivals
        let k = Kernel::Step { pieces: vec![(1.0, 2.0)] };
        let m = LevyModel::new(Distribution::point(1.0), 3.0).unwrap();
        let xs = sample_integral(&k, &m, 10.0, 200_000, 5);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!((mean - 6.0).abs() < 0.03 && (var - 6.0).abs() < 0.1, "{mean} {var}");
    }

    #[test]
    fn rejects_bad_intensity() {
        assert!(LevyModel::new(Distribution::pareto(1.0), 0.0).is_err());
    }
}
