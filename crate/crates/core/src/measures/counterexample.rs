//! The log-periodic counterexample measure and the noise law built from it.
//!
//! With `g(x) = 1 + a cos(theta0 ln x) + b sin(theta0 ln x)` and
//! `nu(dx) = g(x) alpha x^-(alpha+1) dx`, substituting `u = ln z` turns the
//! tail into damped sinusoids:
//!
//! ```text
//! nu(x, inf) = x^-alpha [1 + a Re(C e^{i phi}) + b Im(C e^{i phi})],
//!     C = alpha / (alpha - i theta0),  phi = theta0 ln x.
//! ```
//!
//! so `x^alpha nu(x, inf)` is periodic in `ln x` with period `2 pi / theta0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dist::Distribution;
use super::sampling::invert_tail;
use crate::error::{invalid, Error, Result};

/// Parameters of `nu = g * nu_alpha` and the truncation level of the noise law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub alpha: f64,
    pub theta0: f64,
    pub a: f64,
    pub b: f64,
    pub trunc: f64,
}

impl CounterexampleSpec {
    /// Builds a spec with the default truncation level: the smallest power of
    /// two `b0` with `nu(b0, inf) <= 1/2`.
    pub fn new(alpha: f64, theta0: f64, a: f64, b: f64) -> Result<Self> {
        let mut spec = CounterexampleSpec { alpha, theta0, a, b, trunc: 1.0 };
        spec.validate_shape()?;
        spec.trunc = spec.default_trunc();
        Ok(spec)
    }

    pub fn with_trunc(mut self, trunc: f64) -> Result<Self> {
        self.trunc = trunc;
        self.validate()?;
        Ok(self)
    }

    fn validate_shape(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(invalid(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.theta0.is_finite() && self.theta0 > 0.0) {
            return Err(invalid(format!("theta0 must be positive, got {}", self.theta0)));
        }
        if !(self.a.is_finite() && self.b.is_finite()) || self.a * self.a + self.b * self.b > 1.0 + 1e-12 {
            return Err(invalid(format!("need a^2 + b^2 <= 1, got a = {}, b = {}", self.a, self.b)));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        if !(self.trunc.is_finite() && self.trunc > 0.0) {
            return Err(invalid(format!("trunc must be positive, got {}", self.trunc)));
        }
        let mass = self.nu_tail(self.trunc);
        if mass > 1.0 {
            return Err(Error::TruncationTooSmall { trunc: self.trunc, mass });
        }
        Ok(())
    }

    fn default_trunc(&self) -> f64 {
        (-60..=1023)
            .map(|k| 2f64.powi(k))
            .find(|&x| self.nu_tail(x) <= 0.5)
            .unwrap_or(f64::MAX)
    }

    /// The modulating density `g(x)`.
    pub fn g(&self, x: f64) -> f64 {
        let (s, c) = (self.theta0 * x.ln()).sin_cos();
        1.0 + self.a * c + self.b * s
    }

    /// `nu(x, inf)` in closed form.
    pub fn nu_tail(&self, x: f64) -> f64 {
        let (al, th) = (self.alpha, self.theta0);
        let (s, c) = (th * x.ln()).sin_cos();
        let d = al * al + th * th;
        // C e^{i phi} with C = alpha (alpha + i theta) / (alpha^2 + theta^2)
        let re = al * (al * c - th * s) / d;
        let im = al * (al * s + th * c) / d;
        x.powf(-al) * (1.0 + self.a * re + self.b * im)
    }

    /// Multiplicative period `r = e^{2 pi / theta0}` of `x^alpha nu(x, inf)`.
    pub fn period_ratio(&self) -> f64 {
        (2.0 * std::f64::consts::PI / self.theta0).exp()
    }

    /// Amplitude `A` in `x^alpha nu(x, inf) = 1 + A cos(theta0 ln x + phase)`.
    pub fn amplitude(&self) -> f64 {
        (self.a * self.a + self.b * self.b).sqrt() * self.alpha / self.alpha.hypot(self.theta0)
    }
}

/// `nu(x, inf)` for the log-periodic measure of `spec`.
pub fn counterexample_tail(spec: &CounterexampleSpec, x: f64) -> f64 {
    spec.nu_tail(x)
}

/// The probability law `mu = nu restricted to (trunc, inf) + (1 - nu(trunc, inf)) delta_1`.
///
/// Its symmetrisation is the noise law `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CounterexampleSpec", into = "CounterexampleSpec")]
pub struct NoiseLaw {
    spec: CounterexampleSpec,
    upper: f64,
}

impl TryFrom<CounterexampleSpec> for NoiseLaw {
    type Error = Error;
    fn try_from(spec: CounterexampleSpec) -> Result<Self> {
        build_noise_law(&spec)
    }
}

impl From<NoiseLaw> for CounterexampleSpec {
    fn from(law: NoiseLaw) -> Self {
        law.spec
    }
}

/// Builds the truncated probability law of the counterexample.
pub fn build_noise_law(spec: &CounterexampleSpec) -> Result<NoiseLaw> {
    spec.validate()?;
    Ok(NoiseLaw { spec: *spec, upper: spec.nu_tail(spec.trunc) })
}

impl NoiseLaw {
    pub fn spec(&self) -> &CounterexampleSpec {
        &self.spec
    }

    /// `nu(trunc, inf)`, the mass kept from the log-periodic measure.
    pub fn upper_mass(&self) -> f64 {
        self.upper
    }

    /// Mass moved to the point 1.
    pub fn point_mass(&self) -> f64 {
        1.0 - self.upper
    }

    pub fn total_mass(&self) -> f64 {
        self.mu_tail(0.0)
    }

    /// `mu(x, inf)`.
    pub fn mu_tail(&self, x: f64) -> f64 {
        let cont = self.spec.nu_tail(x.max(self.spec.trunc));
        if x < 1.0 {
            cont + self.point_mass()
        } else {
            cont
        }
    }

    /// `mu[x, inf)`.
    pub fn mu_tail_ge(&self, x: f64) -> f64 {
        let cont = self.spec.nu_tail(x.max(self.spec.trunc));
        if x <= 1.0 {
            cont + self.point_mass()
        } else {
            cont
        }
    }

    /// `P(Z > x)` for the symmetrised noise `Z`.
    pub fn z_tail(&self, x: f64) -> f64 {
        self.to_noise().tail(x)
    }

    /// The symmetric noise law `Z`.
    pub fn to_noise(&self) -> Distribution {
        Distribution::Counterexample(*self).symmetric()
    }

    /// Exact `sup - inf` of `x^alpha P(Z > x)` over one multiplicative period
    /// beyond `max(trunc, 1)`.
    pub fn z_oscillation(&self) -> f64 {
        self.spec.amplitude()
    }

    /// `E[Y^s]` under `mu`, finite for `Re s < alpha`.
    pub fn mellin(&self, s: Complex64) -> Option<Complex64> {
        let CounterexampleSpec { alpha, theta0, a, b, trunc } = self.spec;
        if s.re >= alpha {
            return None;
        }
        let l = trunc.ln();
        let tail_int = |k: Complex64| -(k * l).exp() / k;
        let k0 = s - alpha;
        let kp = k0 + Complex64::new(0.0, theta0);
        let km = k0 - Complex64::new(0.0, theta0);
        let (ip, im) = (tail_int(kp), tail_int(km));
        let osc = 0.5 * a * (ip + im) + Complex64::new(0.0, -0.5) * b * (ip - im);
        Some(self.point_mass() + alpha * (tail_int(k0) + osc))
    }

    /// Solves `nu(x, inf) = u` on `x >= trunc` by Newton in `ln x`,
    /// safeguarded by the bracket `x^-alpha (1 -+ A) = u`.
    fn invert_nu(&self, u: f64) -> f64 {
        let s = &self.spec;
        let amp = s.amplitude();
        let (mut lo, mut hi) = (
            ((1.0 - amp) / u).powf(1.0 / s.alpha).ln().max(s.trunc.ln()),
            ((1.0 + amp) / u).powf(1.0 / s.alpha).ln().max(s.trunc.ln()),
        );
        let mut t = 0.5 * (lo + hi);
        for _ in 0..100 {
            let x = t.exp();
            let f = s.nu_tail(x) - u;
            if f.abs() <= 1e-14 * u {
                return x;
            }
            if f > 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let slope = -s.alpha * x.powf(-s.alpha) * s.g(x);
            let mut next = t - f / slope;
            if !(next >= lo && next <= hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 1e-14 * t.abs().max(1.0) {
                return next.exp();
            }
            t = next;
        }
        t.exp()
    }

    /// `inf { x : mu(x, inf) <= u }`.
    pub fn draw(&self, u: f64) -> f64 {
        if self.spec.trunc >= 1.0 {
            if u >= self.upper {
                1.0
            } else {
                self.invert_nu(u)
            }
        } else {
            let t = |x: f64| self.mu_tail(x);
            invert_tail(&t, u, 1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn half_half_one() -> CounterexampleSpec {
        CounterexampleSpec::new(1.0, PI / LN_2, 0.9, 0.0).unwrap()
    }

    #[test]
    fn flat_modulation_reduces_to_power_tail() {
        let spec = CounterexampleSpec::new(1.0, 3.0, 0.0, 0.0).unwrap();
        assert!((counterexample_tail(&spec, 2.0) - 0.5).abs() < 1e-15);
        for &x in &[0.01, 0.7, 3.0, 1e5] {
            assert!((counterexample_tail(&spec, x) * x - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let spec = half_half_one();
        // int_1^inf g(z) z^-2 dz, in u = ln z with panels of a quarter period
        let f = |u: f64| spec.g(u.exp()) * (-u).exp();
        let period = 2.0 * PI / spec.theta0;
        let mut pts = vec![0.0];
        let mut u = 0.0;
        while u < 60.0 {
            u += period / 4.0;
            pts.push(u);
        }
        let (v, _) = crate::quad::adaptive_real_pieces(f, &pts, 1e-16, 1e-14);
        assert!((counterexample_tail(&spec, 1.0) - v).abs() < 1e-10, "{} vs {v}", counterexample_tail(&spec, 1.0));
    }

    #[test]
    fn log_periodicity() {
        let spec = half_half_one();
        let r = spec.period_ratio();
        assert!((r - 4.0).abs() < 1e-12);
        for &x in &[1.3, 7.0, 123.4] {
            let lhs = spec.nu_tail(r * x);
            let rhs = spec.nu_tail(x) / r;
            assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }
    }

    #[test]
    fn default_truncation_is_smallest_power_of_two() {
        let spec = half_half_one();
        assert!(spec.nu_tail(spec.trunc) <= 0.5);
        assert!(spec.nu_tail(spec.trunc / 2.0) > 0.5);
        assert_eq!(spec.trunc.log2().fract(), 0.0);
    }

    #[test]
    fn pareto_noise_law() {
        let spec = CounterexampleSpec::new(1.0, 1.0, 0.0, 0.0).unwrap().with_trunc(2.0).unwrap();
        let law = build_noise_law(&spec).unwrap();
        assert!((law.mu_tail(2.0) - 0.5).abs() < 1e-15);
        assert!((law.point_mass() - 0.5).abs() < 1e-15);
        assert!((law.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_truncation_and_bad_modulation() {
        let spec = CounterexampleSpec { alpha: 1.0, theta0: 1.0, a: 0.0, b: 0.0, trunc: 0.5 };
        assert!(matches!(build_noise_law(&spec), Err(Error::TruncationTooSmall { .. })));
        assert!(CounterexampleSpec::new(1.0, 1.0, 0.9, 0.9).is_err());
        assert!(CounterexampleSpec::new(1.0, -1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn z_tail_is_log_periodic_and_non_constant() {
        let law = build_noise_law(&half_half_one()).unwrap();
        let x0 = law.spec().trunc * 3.0;
        let h = |x: f64| x * law.z_tail(x);
        assert!((h(4.0 * x0) - h(x0)).abs() < 1e-12);
        assert!((h(2.0 * x0) - h(x0)).abs() > 1e-3);
        // grid sup - inf agrees with the closed-form amplitude
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..=20_000 {
            let v = h(x0 * 4f64.powf(k as f64 / 20_000.0));
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!((hi - lo - law.z_oscillation()).abs() < 1e-8);
        assert!(law.z_oscillation() >= 0.1);
    }

    #[test]
    fn mellin_matches_moment_quadrature() {
        let law = build_noise_law(&half_half_one()).unwrap();
        let p = 0.4;
        let f = |u: f64| (p * u).exp() * law.spec().alpha * law.spec().g(u.exp()) * (-law.spec().alpha * u).exp();
        let l = law.spec().trunc.ln();
        let mut pts = vec![l];
        for k in 1..=4000 {
            pts.push(l + k as f64 * 0.05);
        }
        let (cont, _) = crate::quad::adaptive_real_pieces(f, &pts, 1e-16, 1e-13);
        // remaining tail beyond the grid is below e^{-0.6 * 200}
        let expect = law.point_mass() + cont;
        let got = law.mellin(Complex64::new(p, 0.0)).unwrap();
        assert!((got.re - expect).abs() < 1e-10 && got.im.abs() < 1e-12);
        assert!(law.mellin(Complex64::new(1.0, 0.0)).is_none());
    }

    #[test]
    fn json_field_names() {
        let law = build_noise_law(&half_half_one()).unwrap();
        let v = serde_json::to_value(law).unwrap();
        for key in ["alpha", "theta0", "a", "b", "trunc"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back: NoiseLaw = serde_json::from_value(v).unwrap();
        assert_eq!(back, law);
    }
}
