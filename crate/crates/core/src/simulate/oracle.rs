//! Numeric tail oracles used alongside Monte Carlo.

use std::f64::consts::E;

use crate::measures::{Distribution, Kernel};
use crate::quad::{adaptive_real, adaptive_real_pieces, line_integral};

/// `P(Y Z > x)` for a nonnegative `Y` independent of `Z`, `x > 0`.
///
/// Closed form when `Y` is uniform or discrete and `Z` is (symmetric) Pareto;
/// otherwise `E[P(Z > x / Y)]` by quadrature in `log Y`. `None` when `Y` is
/// not a plain nonnegative law.
pub fn product_tail(y: &Distribution, z: &Distribution, x: f64) -> Option<f64> {
    if matches!(y, Distribution::Symmetric { .. } | Distribution::Counterexample(_)) {
        return None;
    }
    let half = if z.is_symmetric() { 0.5 } else { 1.0 };
    if let (Distribution::Uniform { lo, hi }, Distribution::Pareto { alpha }) = (y, z.magnitude()) {
        let c = x.clamp(*lo, *hi);
        let body = (c.powf(alpha + 1.0) - lo.powf(alpha + 1.0)) / ((alpha + 1.0) * x.powf(*alpha));
        return Some(half * (body + (hi - c)) / (hi - lo));
    }
    if let Some(atoms) = y.atoms() {
        return Some(atoms.iter().map(|&(a, w)| if a > 0.0 { w * z.tail(x / a) } else { 0.0 }).sum());
    }
    let lx = x.ln();
    let mut breaks: Vec<f64> = y.log_kinks();
    breaks.extend(z.magnitude().tail_kinks().into_iter().filter(|k| *k > 0.0).map(|k| lx - k.ln()));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let (lo, hi) = y.log_support();
    let log_g = |u: f64| {
        let d = y.log_density_of_log(u).unwrap_or(f64::NEG_INFINITY);
        let t = z.tail(x * (-u).exp());
        if t <= 0.0 || d == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            d + t.ln()
        }
    };
    Some(line_integral(&log_g, 0.0, 0.0, lo, hi, &breaks).value.re)
}

/// `P(Z_1 + ... + Z_q > x)` for i.i.d. one-sided slowly varying noise with
/// tail `min(1, 1 / ln z)`; available for `q <= 2`.
pub fn slowvar_sum_tail(q: usize, x: f64) -> Option<f64> {
    let t = |z: f64| if z <= E { 1.0 } else { 1.0 / z.ln() };
    match q {
        1 => Some(t(x)),
        2 => {
            if x <= 2.0 * E {
                return Some(1.0);
            }
            // Z_1 = e^v has density dv / v^2 on v > 1
            let top = (x - E).ln();
            let f = |v: f64| t(x - v.exp()) / (v * v);
            let (body, _) = adaptive_real(f, 1.0, top, 1e-15, 1e-12);
            Some(t(x - E) + body)
        }
        _ => None,
    }
}

/// Tail `int P(J > x / f(s)) ds` of the image of `Leb x law(J)` under
/// `(s, j) -> f(s) j`, restricted to `|s| <= h`. Multiply by the intensity to
/// get the output Levy measure tail.
pub fn levy_image_tail(kernel: &Kernel, jump: &Distribution, x: f64, h: f64) -> f64 {
    match kernel {
        Kernel::Step { pieces } => {
            let mut start = 0.0;
            let mut out = 0.0;
            for &(v, m) in pieces {
                let end = (start + m).min(h);
                if end > start {
                    out += (end - start) * jump.tail(x / v);
                }
                start += m;
            }
            out
        }
        _ => {
            let (lo, hi) = kernel.support();
            let (lo, hi) = (lo.max(-h), hi.min(h));
            let mut points = vec![lo];
            if lo < 0.0 && hi > 0.0 {
                points.push(0.0);
            }
            points.push(hi);
            let f = |s: f64| {
                let v = kernel.value(s);
                if v > 0.0 {
                    jump.tail(x / v)
                } else {
                    0.0
                }
            };
            adaptive_real_pieces(f, &points, 1e-15, 1e-11).0
        }
    }
}

/// `sup - inf` of `x^alpha * tail(x)` over `[x0, x0 * ratio]` on a dense
/// geometric grid.
pub fn oscillation<T: Fn(f64) -> f64>(tail: T, alpha: f64, x0: f64, ratio: f64, points: usize) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let step = ratio.ln() / points as f64;
    for k in 0..=points {
        let x = x0 * (step * k as f64).exp();
        let v = x.powf(alpha) * tail(x);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{build_noise_law, CounterexampleSpec};

    #[test]
    fn breiman_uniform_closed_form() {
        let y = Distribution::uniform01();
        let z = Distribution::pareto(1.0);
        for x in [1.0, 3.0, 10.0, 1e6] {
            let v = product_tail(&y, &z, x).unwrap();
            assert!((v - 0.5 / x).abs() < 1e-14 / x, "{x}: {v}");
        }
        // below the kink the mass of Y above x passes with probability one
        assert!((product_tail(&y, &z, 0.5).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        // gamma(1,1) Y and pareto(2) Z: E[min(1, (Y/x)^2)] for x large is 2/x^2
        let y = Distribution::Gamma { shape: 1.0, rate: 1.0 };
        let z = Distribution::pareto(2.0);
        let x = 50.0;
        let exact = {
            // int_0^x (y/x)^2 e^{-y} dy + e^{-x}
            let g = |y: f64| (y / x).powi(2) * (-y).exp();
            adaptive_real(g, 0.0, x, 1e-16, 1e-13).0 + (-x).exp()
        };
        let q = product_tail(&y, &z, x).unwrap();
        assert!((q - exact).abs() < 1e-10 * exact, "{q} vs {exact}");
    }

    #[test]
    fn point_mass_scaling() {
        let z = Distribution::pareto(1.5);
        let p = product_tail(&Distribution::point(2.0), &z, 40.0).unwrap();
        assert!((p / z.tail(40.0) - 2f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn slowvar_sum_matches_monte_carlo_free_bounds() {
        // P(Z1 + Z2 > x) lies between P(max > x) and P(max > x / 2)
        for x in [10.0, 1e3, 1e6] {
            let t = |z: f64| if z <= E { 1.0 } else { 1.0 / z.ln() };
            let v = slowvar_sum_tail(2, x).unwrap();
            let lower = 1.0 - (1.0 - t(x)).powi(2);
            let upper = 1.0 - (1.0 - t(x / 2.0)).powi(2);
            assert!(v >= lower - 1e-12 && v <= upper + 1e-12, "x = {x}: {lower} {v} {upper}");
        }
        assert_eq!(slowvar_sum_tail(3, 10.0), None);
    }

    #[test]
    fn levy_tail_of_unit_step_is_jump_tail() {
        let k = Kernel::Step { pieces: vec![(1.0, 1.0)] };
        let j = Distribution::pareto(1.0);
        assert!((levy_image_tail(&k, &j, 50.0, 10.0) - 0.02).abs() < 1e-15);
        // exponential kernel, pareto(1): int_0^inf min(1, e^{-s}/x) ds = 1/x for x >= 1
        let k = Kernel::Exp { lambda: 1.0 };
        assert!((levy_image_tail(&k, &j, 50.0, 60.0) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn oscillation_matches_amplitude() {
        let spec = CounterexampleSpec::new(1.0, std::f64::consts::PI / 2f64.ln(), 0.9, 0.0).unwrap();
        let law = build_noise_law(&spec).unwrap();
        let x0 = 4.0 * spec.trunc.max(1.0);
        let osc = oscillation(|x| law.z_tail(x), 1.0, x0, spec.period_ratio(), 20_000);
        assert!((osc - spec.amplitude()).abs() < 1e-6, "{osc} vs {}", spec.amplitude());
    }
}
