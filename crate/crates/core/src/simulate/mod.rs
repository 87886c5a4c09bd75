//! Monte Carlo and exact-numeric checks of the forward tail limits and of the
//! counterexample direction.
//!
//! Every entry point samples deterministically from `(n, seed)` and returns a
//! [`TailReport`]; callers attach pass/fail checks with the `check_*` helpers.

pub mod levy;
pub mod oracle;
pub mod report;

use serde::{Deserialize, Serialize};

pub use levy::{default_horizon, sample_integral, LevyModel};
pub use report::{Check, Probe, RatioKind, ReportSpec, TailReport};

use crate::error::{invalid, Error, Result};
use crate::measures::sampling::{open_uniform, sample_with};
use crate::measures::{Distribution, Kernel, Weights};

/// Grid points per period when scanning a log-periodic tail.
const OSCILLATION_POINTS: usize = 20_000;

/// Sample size, seed and the thresholds at which ratios are reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub n: usize,
    pub seed: u64,
    #[serde(default)]
    pub probes: Vec<f64>,
}

impl SimOptions {
    pub fn new(n: usize, seed: u64, probes: &[f64]) -> Self {
        SimOptions { n, seed, probes: probes.to_vec() }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 10 {
            return Err(invalid(format!("sample size must be at least 10, got {}", self.n)));
        }
        if self.probes.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(invalid("probe thresholds must be positive"));
        }
        Ok(())
    }
}

fn spec<'a>(scenario: &'a str, opts: &'a SimOptions, alpha: f64, target: f64, kind: RatioKind) -> ReportSpec<'a> {
    ReportSpec {
        scenario,
        n: opts.n,
        seed: opts.seed,
        alpha,
        target_ratio: target,
        ratio_kind: kind,
        probes: &opts.probes,
    }
}

/// Exact `sup - inf` of `x^alpha P(Z > x)` over one period for log-periodic
/// noise, scanned beyond the truncation and the point mass.
fn noise_oscillation(noise: &Distribution, alpha: f64) -> Option<f64> {
    let Distribution::Counterexample(law) = noise.magnitude() else {
        return None;
    };
    let spec = law.spec();
    let x0 = 2.0 * spec.trunc.max(1.0);
    Some(oracle::oscillation(|x| noise.tail(x), alpha, x0, spec.period_ratio(), OSCILLATION_POINTS))
}

/// `X = sum psi_j Z_j` with i.i.d. noise; target ratio `sum psi_j^alpha`
/// for `P(X > x) / P(Z > x)`.
pub fn verify_weighted_sum(weights: &Weights, noise: &Distribution, alpha: f64, opts: &SimOptions) -> Result<TailReport> {
    opts.validate()?;
    weights.validate()?;
    noise.validate()?;
    if !(alpha > 0.0) {
        return Err(invalid("weighted sums need alpha > 0; use the slow-variation check for alpha = 0"));
    }
    let psi = weights.truncated(alpha / 2.0)?;
    let target = weights.power_sum(alpha);
    let samples = sample_with(opts.n, opts.seed, |rng| psi.iter().map(|w| w * noise.draw(open_uniform(rng))).sum());
    let spec = spec("weighted-sum", opts, alpha, target, RatioKind::OutputOverInput);
    let exact: Option<&dyn Fn(f64) -> f64> = None;
    let mut r = if psi.len() == 1 {
        let f = |x: f64| noise.tail(x / psi[0]);
        TailReport::from_samples(&spec, samples, &|x| noise.tail(x), Some(&f))
    } else {
        TailReport::from_samples(&spec, samples, &|x| noise.tail(x), exact)
    };
    r.oscillation = noise_oscillation(noise, alpha);
    Ok(r)
}

/// `X = Y Z` with independent `Y >= 0`; target ratio `E[Y^alpha]` (or 1 at
/// `alpha = 0`) for `P(Y Z > x) / P(Z > x)`.
///
/// The moment condition uses slack `alpha / 2`, or `1/2` at `alpha = 0`.
pub fn verify_product(y: &Distribution, z: &Distribution, alpha: f64, opts: &SimOptions) -> Result<TailReport> {
    opts.validate()?;
    y.validate()?;
    z.validate()?;
    if y.is_symmetric() {
        return Err(invalid("the random factor must be nonnegative"));
    }
    if !(alpha >= 0.0) {
        return Err(invalid(format!("alpha must be nonnegative, got {alpha}")));
    }
    let delta = if alpha > 0.0 { alpha / 2.0 } else { 0.5 };
    if !y.moment(alpha + delta).is_finite() {
        return Err(Error::MomentDivergence { what: format!("factor {y}"), order: alpha + delta });
    }
    let target = if alpha > 0.0 { y.moment(alpha) } else { 1.0 };
    let samples = sample_with(opts.n, opts.seed, |rng| y.draw(open_uniform(rng)) * z.draw(open_uniform(rng)));
    let spec = spec("product", opts, alpha, target, RatioKind::OutputOverInput);
    let has_oracle = oracle::product_tail(y, z, 1.0).is_some();
    let f = |x: f64| oracle::product_tail(y, z, x).unwrap_or(f64::NAN);
    let exact: Option<&dyn Fn(f64) -> f64> = if has_oracle { Some(&f) } else { None };
    let mut r = TailReport::from_samples(&spec, samples, &|x| z.tail(x), exact);
    r.oscillation = noise_oscillation(z, alpha);
    Ok(r)
}

/// `X = int f(s) dL(s)` for a compound-Poisson `L`; target ratio
/// `int f^alpha` for `P(X > x) / eta(x, inf)`.
///
/// `horizon` defaults to [`default_horizon`]; a user horizon leaving more
/// than 1% of `int f^alpha` outside is rejected. Probes also carry the ratio
/// of the exact output Levy measure tail to `eta(x, inf)`.
pub fn verify_integral(
    kernel: &Kernel,
    levy: &LevyModel,
    alpha: f64,
    horizon: Option<f64>,
    opts: &SimOptions,
) -> Result<TailReport> {
    opts.validate()?;
    kernel.validate()?;
    levy.validate()?;
    if !(alpha >= 0.0) {
        return Err(invalid(format!("alpha must be nonnegative, got {alpha}")));
    }
    if alpha == 0.0 {
        let (lo, hi) = kernel.support();
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Inapplicable("alpha = 0 needs a kernel supported on a set of finite length".into()));
        }
    } else {
        kernel.check_integrability(alpha, alpha / 2.0)?;
    }
    let h = match horizon {
        Some(h) if !(h > 0.0) => return Err(invalid(format!("horizon must be positive, got {h}"))),
        Some(h) => h,
        None => default_horizon(kernel, alpha),
    };
    let fraction = if alpha == 0.0 {
        let (lo, hi) = kernel.support();
        let kept = hi.min(h) - lo.max(-h);
        let f = 1.0 - kept.max(0.0) / (hi - lo);
        if f > 0.01 {
            return Err(Error::HorizonTooSmall { horizon: h, fraction: f });
        }
        f
    } else {
        kernel.check_horizon(alpha, h)?
    };
    let target = kernel.power_integral(alpha);
    let samples = sample_integral(kernel, levy, h, opts.n, opts.seed);
    let spec = spec("integral", opts, alpha, target, RatioKind::OutputOverInput);
    let mut r = TailReport::from_samples(&spec, samples, &|x| levy.levy_tail(x), None);
    for p in &mut r.probes {
        p.levy_ratio = Some(levy.intensity * oracle::levy_image_tail(kernel, &levy.jump, p.x, h) / p.reference);
    }
    r.horizon_fraction = Some(fraction);
    r.oscillation = noise_oscillation(&levy.jump, alpha);
    Ok(r)
}

/// `X_q = Z_1 + ... + Z_q` for slowly varying noise; target ratio `1/q` for
/// `P(Z > x) / P(X_q > x)`.
pub fn verify_slow_variation_sum(q: usize, noise: &Distribution, opts: &SimOptions) -> Result<TailReport> {
    opts.validate()?;
    noise.validate()?;
    if q == 0 {
        return Err(invalid("q must be at least 1"));
    }
    if !noise.is_slowly_varying() {
        return Err(Error::Inapplicable(format!("noise {noise} does not have a slowly varying tail")));
    }
    let samples = sample_with(opts.n, opts.seed, |rng| (0..q).map(|_| noise.draw(open_uniform(rng))).sum());
    let spec = spec("slowvar-sum", opts, 0.0, 1.0 / q as f64, RatioKind::InputOverOutput);
    let one_sided = !noise.is_symmetric();
    let f = |x: f64| oracle::slowvar_sum_tail(q, x).unwrap_or(f64::NAN);
    let exact: Option<&dyn Fn(f64) -> f64> = if one_sided && q <= 2 { Some(&f) } else { None };
    Ok(TailReport::from_samples(&spec, samples, &|x| noise.tail(x), exact))
}
