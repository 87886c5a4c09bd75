//! Failure curves of three coefficients `(psi1, psi2, 1)` at `alpha = 1`:
//! the points where `psi1^(1+i theta) + psi2^(1+i theta) + 1 = 0` for some
//! real `theta`.
//!
//! Every traced curve touches the line `psi1 + psi2 = 1` at an anchor where
//! `log psi1 / log psi2 = p/q` with `p, q` odd and both phases equal `-1`.
//! The curve is tangent to that line there, so `theta` is stationary and
//! fixed-`theta` Newton is singular; tracing runs in `(psi1, psi2, theta)`
//! by pseudo-arclength continuation instead.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Residual bound for emitted points.
pub const CURVE_RESIDUAL: f64 = 1e-9;
const PSI_MIN: f64 = 1e-3;
const PSI_MAX: f64 = 1.0 - 1e-7;

/// `(n, m, s1, s2)` with `theta log(psi1/psi2) = s1 A1 + 2 pi n` and
/// `theta log psi2 = s2 A2 + 2 pi m`, where `A1`, `A2` are the two arccos
/// terms obtained by squaring the real and imaginary equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchLabel {
    pub n: i64,
    pub m: i64,
    pub s1: i8,
    pub s2: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub psi1: f64,
    pub psi2: f64,
    pub theta: f64,
    pub residual: f64,
    pub label: BranchLabel,
}

/// `psi1^(1+i theta) + psi2^(1+i theta) + 1`.
pub fn residual_c(psi1: f64, psi2: f64, theta: f64) -> Complex64 {
    let s = Complex64::new(1.0, theta);
    (s * psi1.ln()).exp() + (s * psi2.ln()).exp() + 1.0
}

fn nearest_branch(phase: f64, a: f64) -> (i8, i64, f64) {
    let mut best = (1i8, 0i64, f64::INFINITY);
    for s in [1i8, -1] {
        let n = ((phase - s as f64 * a) / (2.0 * PI)).round();
        let err = (phase - s as f64 * a - 2.0 * PI * n).abs();
        if err < best.2 {
            best = (s, n as i64, err);
        }
    }
    best
}

pub fn branch_label(psi1: f64, psi2: f64, theta: f64) -> BranchLabel {
    let a1 = ((1.0 - psi1 * psi1 - psi2 * psi2) / (2.0 * psi1 * psi2)).clamp(-1.0, 1.0).acos();
    let a2 = ((psi1 * psi1 - psi2 * psi2 - 1.0) / (2.0 * psi2)).clamp(-1.0, 1.0).acos();
    let (s1, n, _) = nearest_branch(theta * (psi1 / psi2).ln(), a1);
    let (s2, m, _) = nearest_branch(theta * psi2.ln(), a2);
    BranchLabel { n, m, s1, s2 }
}

fn point(psi1: f64, psi2: f64, theta: f64) -> CurvePoint {
    CurvePoint { psi1, psi2, theta, residual: residual_c(psi1, psi2, theta).norm(), label: branch_label(psi1, psi2, theta) }
}

/// Newton in `(psi1, psi2)` at fixed `theta`.
fn newton_fixed_theta(mut p1: f64, mut p2: f64, theta: f64) -> Option<(f64, f64)> {
    let s = Complex64::new(1.0, theta);
    for _ in 0..50 {
        let f = residual_c(p1, p2, theta);
        if f.norm() < 1e-15 {
            break;
        }
        let d1 = s * (Complex64::new(0.0, theta) * p1.ln()).exp();
        let d2 = s * (Complex64::new(0.0, theta) * p2.ln()).exp();
        let det = d1.re * d2.im - d2.re * d1.im;
        if det.abs() < 1e-300 {
            return None;
        }
        let dp1 = (f.re * d2.im - d2.re * f.im) / det;
        let dp2 = (d1.re * f.im - f.re * d1.im) / det;
        p1 -= dp1;
        p2 -= dp2;
        if !(p1 > 0.0 && p2 > 0.0 && p1 < 1.0 && p2 < 1.0) {
            return None;
        }
    }
    Some((p1, p2))
}

/// Boundary anchors at a given `theta`: `psi_k = e^(-pi (2 k + 1) / theta)`
/// with `psi1 + psi2 = 1`.
fn boundary_points_at(theta: f64) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    let kmax = ((-PSI_MIN.ln()) * theta / (2.0 * PI)).ceil() as i64;
    for k1 in 0..=kmax {
        let p1 = (-PI * (2 * k1 + 1) as f64 / theta).exp();
        for k2 in 0..=kmax {
            let p2 = (-PI * (2 * k2 + 1) as f64 / theta).exp();
            if (p1 + p2 - 1.0).abs() <= 1e-9 {
                let pt = point(p1, p2, theta);
                if pt.residual <= CURVE_RESIDUAL {
                    out.push(pt);
                }
            }
        }
    }
    out
}

/// All failure points at a fixed `theta` inside `(0, 1)^2`, optionally
/// restricted to labels with `|n|, |m| <= max_label`.
///
/// Interior points are bracketed by a sign change of the phase mismatch in
/// `u1 = log psi1` and polished by Newton; tangential boundary points are
/// added from the odd-lattice condition.
pub fn solve_failure_point(theta: f64, max_label: Option<i64>) -> Vec<CurvePoint> {
    if !(theta > 0.0 && theta.is_finite()) {
        return vec![];
    }
    let s = Complex64::new(1.0, theta);
    // mismatch D = (w/|w|) e^{-i theta ln|w|}, which equals 1 at a solution
    let mismatch = |u1: f64| -> Option<Complex64> {
        let w = -1.0 - (s * u1).exp();
        let r = w.norm();
        if !(r > PSI_MIN && r < 1.0) {
            return None;
        }
        Some(w / r * Complex64::new(0.0, -theta * r.ln()).exp())
    };
    let lo = PSI_MIN.ln();
    let n = 4000 + (400.0 * theta) as usize;
    let grid: Vec<f64> = (0..=n).map(|k| lo + (-1e-12 - lo) * k as f64 / n as f64).collect();
    let mut out: Vec<CurvePoint> = Vec::new();
    for w in grid.windows(2) {
        let (Some(da), Some(db)) = (mismatch(w[0]), mismatch(w[1])) else { continue };
        if da.im.signum() == db.im.signum() || da.re <= 0.0 || db.re <= 0.0 {
            continue;
        }
        let (mut a, mut b) = (w[0], w[1]);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            let Some(dm) = mismatch(mid) else { break };
            if dm.im.signum() == da.im.signum() {
                a = mid;
            } else {
                b = mid;
            }
            if b - a < 1e-16 {
                break;
            }
        }
        let u1 = 0.5 * (a + b);
        let p1 = u1.exp();
        let p2 = (-1.0 - (s * u1).exp()).norm();
        let (p1, p2) = newton_fixed_theta(p1, p2, theta).unwrap_or((p1, p2));
        out.push(point(p1, p2, theta));
    }
    out.extend(boundary_points_at(theta));
    out.retain(|p| p.residual <= CURVE_RESIDUAL);
    if let Some(k) = max_label {
        out.retain(|p| p.label.n.abs() <= k && p.label.m.abs() <= k);
    }
    out.sort_by(|a, b| a.psi1.total_cmp(&b.psi1));
    out.dedup_by(|a, b| (a.psi1 - b.psi1).abs() < 1e-9 && (a.psi2 - b.psi2).abs() < 1e-9);
    out
}

/// A boundary anchor: `log psi1 / log psi2 = p / q`, `theta = pi q t / |log psi2|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub p: i64,
    pub q: i64,
    pub t: i64,
    pub psi1: f64,
    pub psi2: f64,
    pub theta: f64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Solves `y^(p/q) + y = 1` for `y` in `(0, 1)` by bisection.
pub fn boundary_root(p: i64, q: i64) -> f64 {
    let r = p as f64 / q as f64;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid.powf(r) + mid > 1.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

/// Anchors with `p, q, t` odd, `gcd(p, q) = 1` and `p t, q t <= 2 k + 1`.
pub fn anchors(k: i64) -> Vec<Anchor> {
    let top = 2 * k + 1;
    let mut out = Vec::new();
    for t in (1..=top).step_by(2) {
        for p in (1..=top / t).step_by(2) {
            for q in (1..=top / t).step_by(2) {
                if gcd(p, q) != 1 {
                    continue;
                }
                let psi2 = boundary_root(p, q);
                let psi1 = 1.0 - psi2;
                // recompute psi1 from the exact ratio for the phase condition
                let psi1 = psi1.min(psi2.powf(p as f64 / q as f64));
                let theta = PI * (q * t) as f64 / psi2.ln().abs();
                if psi1 >= PSI_MIN && psi2 >= PSI_MIN {
                    out.push(Anchor { p, q, t, psi1, psi2, theta });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    /// Branch index bound: anchors with `p t, q t <= 2 k + 1`.
    pub branches: i64,
    pub theta_max: f64,
    pub h_max: f64,
    pub h_min: f64,
    /// Minimum spacing of emitted points in the `(psi1, psi2)` plane.
    pub spacing: f64,
    pub max_steps: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { branches: 8, theta_max: 400.0, h_max: 0.02, h_min: 1e-9, spacing: 2e-3, max_steps: 200_000 }
    }
}

/// One traced curve through an anchor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub id: usize,
    pub anchor: Anchor,
    pub label: BranchLabel,
    pub points: Vec<CurvePoint>,
}

type V3 = [f64; 3];

fn jac(x: &V3, theta_ref: f64) -> (Complex64, [Complex64; 3]) {
    let theta = x[2] * theta_ref;
    let s = Complex64::new(1.0, theta);
    let e1 = (Complex64::new(0.0, theta) * x[0].ln()).exp();
    let e2 = (Complex64::new(0.0, theta) * x[1].ln()).exp();
    let f = x[0] * e1 + x[1] * e2 + 1.0;
    let d1 = s * e1;
    let d2 = s * e2;
    let dt = Complex64::i() * (x[0] * x[0].ln() * e1 + x[1] * x[1].ln() * e2) * theta_ref;
    (f, [d1, d2, dt])
}

fn tangent(d: &[Complex64; 3]) -> V3 {
    let r1 = [d[0].re, d[1].re, d[2].re];
    let r2 = [d[0].im, d[1].im, d[2].im];
    let c = [r1[1] * r2[2] - r1[2] * r2[1], r1[2] * r2[0] - r1[0] * r2[2], r1[0] * r2[1] - r1[1] * r2[0]];
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    [c[0] / n, c[1] / n, c[2] / n]
}

fn solve3(a: [[f64; 3]; 3], b: V3) -> Option<V3> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        *o = det(m) / d;
    }
    Some(out)
}

/// Corrector: Newton on `F = 0` within the hyperplane orthogonal to `t`
/// through the predicted point. Returns the point and the iteration count.
fn correct(pred: V3, t: &V3, theta_ref: f64) -> Option<(V3, usize)> {
    let mut x = pred;
    for it in 1..=8 {
        let (f, d) = jac(&x, theta_ref);
        let g = t[0] * (x[0] - pred[0]) + t[1] * (x[1] - pred[1]) + t[2] * (x[2] - pred[2]);
        let a = [[d[0].re, d[1].re, d[2].re], [d[0].im, d[1].im, d[2].im], *t];
        let dx = solve3(a, [-f.re, -f.im, -g])?;
        for k in 0..3 {
            x[k] += dx[k];
        }
        if !(x[0] > 0.0 && x[1] > 0.0) {
            return None;
        }
        let step = (dx[0] * dx[0] + dx[1] * dx[1] + dx[2] * dx[2]).sqrt();
        if step < 1e-13 {
            let (f, _) = jac(&x, theta_ref);
            return (f.norm() < 1e-12).then_some((x, it));
        }
    }
    None
}

/// Traces one direction from the anchor until the curve leaves the square.
fn trace_half(anchor: &Anchor, dir: f64, opts: &TraceOptions) -> Vec<CurvePoint> {
    let theta_ref = anchor.theta;
    let mut x: V3 = [anchor.psi1, anchor.psi2, 1.0];
    let (_, d) = jac(&x, theta_ref);
    let t0 = tangent(&d);
    let mut t_prev = [dir * t0[0], dir * t0[1], dir * t0[2]];
    let mut h = opts.h_max * 0.1;
    let mut failures = 0;
    let mut out = Vec::new();
    let mut last = (x[0], x[1]);
    for _ in 0..opts.max_steps {
        let (_, d) = jac(&x, theta_ref);
        let mut t = tangent(&d);
        if t[0] * t_prev[0] + t[1] * t_prev[1] + t[2] * t_prev[2] < 0.0 {
            t = [-t[0], -t[1], -t[2]];
        }
        let pred = [x[0] + h * t[0], x[1] + h * t[1], x[2] + h * t[2]];
        match correct(pred, &t, theta_ref) {
            Some((xn, iters)) => {
                failures = 0;
                x = xn;
                t_prev = t;
                if iters > 5 {
                    h = (h * 0.5).max(opts.h_min);
                } else if iters <= 2 {
                    h = (h * 1.5).min(opts.h_max);
                }
            }
            None => {
                failures += 1;
                h *= 0.5;
                if failures >= 3 || h < opts.h_min {
                    break;
                }
                continue;
            }
        }
        let theta = x[2] * theta_ref;
        let inside = x[0] > PSI_MIN && x[1] > PSI_MIN && x[0] < PSI_MAX && x[1] < PSI_MAX && theta > 0.0 && theta < opts.theta_max;
        if !inside {
            break;
        }
        if (x[0] - last.0).hypot(x[1] - last.1) >= opts.spacing {
            out.push(point(x[0], x[1], theta));
            last = (x[0], x[1]);
        }
    }
    out
}

fn trace_anchor(anchor: &Anchor, opts: &TraceOptions) -> Vec<CurvePoint> {
    let mut back = trace_half(anchor, -1.0, opts);
    back.reverse();
    back.push(point(anchor.psi1, anchor.psi2, anchor.theta));
    back.extend(trace_half(anchor, 1.0, opts));
    back.retain(|p| p.residual <= CURVE_RESIDUAL);
    back
}

/// Whether the polyline passes through the anchor point at its `theta`.
fn passes_through(points: &[CurvePoint], a: &Anchor) -> bool {
    points.windows(2).any(|w| {
        let (p, q) = (&w[0], &w[1]);
        let (dx, dy, dt) = (q.psi1 - p.psi1, q.psi2 - p.psi2, q.theta - p.theta);
        let len2 = dx * dx + dy * dy + dt * dt;
        if len2 == 0.0 {
            return false;
        }
        let s = (((a.psi1 - p.psi1) * dx + (a.psi2 - p.psi2) * dy + (a.theta - p.theta) * dt) / len2).clamp(0.0, 1.0);
        let (ex, ey, et) = (p.psi1 + s * dx - a.psi1, p.psi2 + s * dy - a.psi2, p.theta + s * dt - a.theta);
        ex.hypot(ey) < 1e-4 && et.abs() < 1e-4 * a.theta
    })
}

/// Traces the curves through every anchor of [`anchors`], dropping curves
/// already traced from an earlier anchor.
pub fn trace_curves(opts: &TraceOptions) -> Result<Vec<Branch>> {
    if !(opts.h_max > 0.0 && opts.h_min > 0.0 && opts.spacing > 0.0 && opts.branches >= 0) {
        return Err(invalid("trace options need positive steps and a nonnegative branch bound"));
    }
    let list = anchors(opts.branches);
    let traced: Vec<Vec<CurvePoint>> = list.par_iter().map(|a| trace_anchor(a, opts)).collect();
    let mut out: Vec<Branch> = Vec::new();
    for (i, (a, pts)) in list.iter().zip(traced).enumerate() {
        let seen = (0..i).any(|j| {
            let earlier = &list[j];
            (earlier.theta - a.theta).abs() < 1e-6 * a.theta && passes_through(&pts, earlier)
        });
        if seen || pts.len() < 2 {
            continue;
        }
        out.push(Branch { id: out.len(), anchor: *a, label: branch_label(a.psi1, a.psi2, a.theta), points: pts });
    }
    Ok(out)
}

/// CSV with columns `branch, theta, psi1, psi2, residual`.
pub fn curves_csv(branches: &[Branch]) -> String {
    let mut s = String::from("branch,theta,psi1,psi2,residual\n");
    for b in branches {
        for p in &b.points {
            let _ = writeln!(s, "{},{:.12},{:.12},{:.12},{:.3e}", b.id, p.theta, p.psi1, p.psi2, p.residual);
        }
    }
    s
}

/// SVG of the unit square with the line `psi1 + psi2 = 1`, the curves and
/// their anchors.
pub fn curves_svg(branches: &[Branch]) -> String {
    let size = 600.0;
    let pad = 40.0;
    let map = |p1: f64, p2: f64| (pad + p1 * size, pad + (1.0 - p2) * size);
    let mut s = String::new();
    let total = size + 2.0 * pad;
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#);
    let _ = writeln!(s, r#"<rect x="{pad}" y="{pad}" width="{size}" height="{size}" fill="white" stroke="black"/>"#);
    let (x0, y0) = map(0.0, 1.0);
    let (x1, y1) = map(1.0, 0.0);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="gray" stroke-dasharray="4 4"/>"#);
    for b in branches {
        let hue = (b.id * 47) % 360;
        let pts: Vec<String> = b.points.iter().map(|p| {
            let (x, y) = map(p.psi1, p.psi2);
            format!("{x:.2},{y:.2}")
        }).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="hsl({hue},70%,40%)" stroke-width="1.2" points="{}"/>"#, pts.join(" "));
        let (ax, ay) = map(b.anchor.psi1, b.anchor.psi2);
        let _ = writeln!(s, r#"<circle cx="{ax:.2}" cy="{ay:.2}" r="2.5" fill="black"/>"#);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="14">psi1</text>"#, pad + size / 2.0, total - 8.0);
    let _ = writeln!(s, r#"<text x="6" y="{}" font-size="14">psi2</text>"#, pad + size / 2.0);
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn boundary_root_oracle() {
        let y = boundary_root(3, 1);
        assert!((y - 0.682_327_803_828_019_3).abs() < 1e-12);
        assert!((y.powi(3) + y - 1.0).abs() < 1e-15);
        assert!((boundary_root(1, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fixed_theta_contains_anchors() {
        let pts = solve_failure_point(PI / LN_2, None);
        assert!(pts.iter().any(|p| (p.psi1 - 0.5).abs() < 1e-9 && (p.psi2 - 0.5).abs() < 1e-9), "{pts:?}");
        let y = boundary_root(3, 1);
        let pts = solve_failure_point(PI / y.ln().abs(), None);
        assert!(pts.iter().any(|p| (p.psi1 - y.powi(3)).abs() < 1e-9 && (p.psi2 - y).abs() < 1e-9));
        for p in &pts {
            assert!(p.residual <= CURVE_RESIDUAL && p.psi1 + p.psi2 >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn interior_points_at_generic_theta() {
        let pts = solve_failure_point(7.0, None);
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(residual_c(p.psi1, p.psi2, 7.0).norm() <= CURVE_RESIDUAL);
        }
    }

    #[test]
    fn labels_at_anchor() {
        // psi1 = psi2 = 1/2, theta = pi / ln 2: n = 0 and theta ln psi2 = -pi
        let l = branch_label(0.5, 0.5, PI / LN_2);
        assert_eq!(l.n, 0);
        assert!(l.m == 0 || l.m == -1);
    }

    #[test]
    fn traces_symmetric_curves() {
        let opts = TraceOptions { branches: 1, ..Default::default() };
        let b = trace_curves(&opts).unwrap();
        assert!(b.len() >= 3, "{}", b.len());
        for br in &b {
            for p in &br.points {
                assert!(p.residual <= CURVE_RESIDUAL);
                assert!(p.psi1 + p.psi2 >= 1.0 - 1e-9);
            }
        }
        let csv = curves_csv(&b);
        assert!(csv.starts_with("branch,theta,psi1,psi2,residual"));
        assert!(curves_svg(&b).contains("<polyline"));
    }
}
