//! Lipschitz-certified scans of `|M(theta)|` over a window.
//!
//! From `|M(theta)| = m` and `|M'| <= L`, no zero lies within `m / L`, so a
//! step of `0.9 m / L` never jumps over one. With a second-derivative bound
//! `L2` and the exact derivative `d`, the step can grow to the positive root
//! of `m - |d| t - L2 t^2 / 2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::mellin::{
    atoms_derivative_bound, atoms_second_derivative_bound, eval_atoms_derivative, eval_atoms_s, EvalMode, Subject,
};

/// Safety factor on certified steps.
pub const STEP_SLACK: f64 = 0.9;
/// A point is a zero when `|M| <= ZERO_RTOL * M(0)`.
pub const ZERO_RTOL: f64 = 1e-9;
/// Local refinement is attempted once `|M|` drops below this fraction of `M(0)`.
const REFINE_RTOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Polishing tolerance on `theta`.
    pub tol: f64,
    pub mode: EvalMode,
    /// Evaluation budget over the whole window.
    pub max_evals: usize,
    /// Number of independent sub-windows.
    pub windows: usize,
    /// Use closed-form and dominant-atom certificates before scanning.
    pub certificates: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { tol: 1e-12, mode: EvalMode::Auto, max_evals: 20_000_000, windows: 32, certificates: true }
    }
}

/// What a scan established on `[lo, reached]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOutcome {
    pub zero: Option<(f64, f64)>,
    pub min_modulus: f64,
    /// Right end of the certified range.
    pub reached: f64,
    pub complete: bool,
    pub evals: usize,
}

/// `theta -> M(theta)` for one subject on one line.
pub struct LineFn<'a> {
    subject: &'a Subject,
    atoms: Option<Vec<(f64, f64)>>,
    alpha: f64,
    mode: EvalMode,
    /// `M(0)`.
    pub scale: f64,
    pub lip1: f64,
    pub lip2: Option<f64>,
}

impl<'a> LineFn<'a> {
    pub fn new(subject: &'a Subject, alpha: f64, mode: EvalMode) -> Self {
        let atoms = subject.atomic_measure().map(|m| m.atoms);
        let (lip1, lip2) = match &atoms {
            Some(a) => (atoms_derivative_bound(a, alpha), Some(atoms_second_derivative_bound(a, alpha))),
            None => (subject.derivative_bound(alpha), None),
        };
        let mut f = LineFn { subject, atoms, alpha, mode, scale: 0.0, lip1, lip2 };
        f.scale = f.value(0.0).0.re;
        f
    }

    /// `M` at complex `theta`, i.e. at `s = alpha + i theta`.
    pub fn value_c(&self, theta: Complex64) -> (Complex64, f64) {
        let s = Complex64::new(self.alpha, 0.0) + Complex64::i() * theta;
        match &self.atoms {
            Some(a) => (eval_atoms_s(a, s), 0.0),
            None => {
                let e = self.subject.eval_s(s, self.mode);
                (e.value, e.abs_error)
            }
        }
    }

    pub fn value(&self, theta: f64) -> (Complex64, f64) {
        self.value_c(Complex64::new(theta, 0.0))
    }

    fn derivative_c(&self, theta: Complex64) -> Option<Complex64> {
        let a = self.atoms.as_ref()?;
        let s = Complex64::new(self.alpha, 0.0) + Complex64::i() * theta;
        Some(a.iter().map(|&(x, w)| w * Complex64::new(0.0, x.ln()) * (s * x.ln()).exp()).sum())
    }

    pub fn derivative(&self, theta: f64) -> Option<Complex64> {
        self.atoms.as_ref().map(|a| eval_atoms_derivative(a, self.alpha, theta))
    }

    fn modulus(&self, theta: f64) -> f64 {
        self.value(theta).0.norm()
    }

    /// Newton (atoms) or secant polish in the complex `theta` plane; returns
    /// a real root estimate when the iteration settles near the real axis.
    pub fn polish(&self, start: f64, tol: f64) -> Option<f64> {
        let mut z = Complex64::new(start, 0.0);
        let step_tol = tol.max(1e-15 * start.abs().max(1.0));
        if self.atoms.is_some() {
            for _ in 0..60 {
                let f = self.value_c(z).0;
                let d = self.derivative_c(z)?;
                if d.norm() == 0.0 {
                    break;
                }
                let dz = f / d;
                z -= dz;
                if dz.norm() <= step_tol {
                    break;
                }
            }
        } else {
            let mut z0 = z;
            let mut z1 = z + 1e-6 * start.abs().max(1.0);
            let mut f0 = self.value_c(z0).0;
            for _ in 0..60 {
                let f1 = self.value_c(z1).0;
                let den = f1 - f0;
                if den.norm() == 0.0 {
                    break;
                }
                let z2 = z1 - f1 * (z1 - z0) / den;
                (z0, f0, z1) = (z1, f1, z2);
                if (z1 - z0).norm() <= step_tol {
                    break;
                }
            }
            z = z1;
        }
        let good = z.re.is_finite() && z.im.abs() <= 1e-6 * z.re.abs().max(1.0) && (z.re - start).abs() < 1.0;
        good.then_some(z.re)
    }

    /// Golden-section minimum of `|M|` on `[a, b]`.
    fn golden_min(&self, mut a: f64, mut b: f64, tol: f64) -> (f64, f64, usize) {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (self.modulus(c), self.modulus(d));
        let mut evals = 2;
        while (b - a) > tol.max(1e-15 * b.abs()) && evals < 200 {
            if fc < fd {
                b = d;
                (d, fd) = (c, fc);
                c = b - g * (b - a);
                fc = self.modulus(c);
            } else {
                a = c;
                (c, fc) = (d, fd);
                d = a + g * (b - a);
                fd = self.modulus(d);
            }
            evals += 1;
        }
        if fc < fd {
            (c, fc, evals)
        } else {
            (d, fd, evals)
        }
    }

    /// Tries to turn a point of small modulus into a certified zero.
    fn refine(&self, theta: f64, hi: f64, m: f64, tol: f64) -> (Option<(f64, f64)>, f64, usize) {
        let slope = match self.derivative(theta) {
            Some(d) => d.norm(),
            None => {
                let h = 1e-6 * theta.abs().max(1.0);
                (self.value(theta + h).0 - self.value(theta).0).norm() / h
            }
        };
        let width = (3.0 * m / slope.max(1e-300)).min(hi - theta).max(0.0);
        let (best, fbest, evals) = if width > 0.0 { self.golden_min(theta, theta + width, tol) } else { (theta, m, 0) };
        let threshold = ZERO_RTOL * self.scale;
        let mut found = None;
        let candidates = [Some(best), self.polish(best, tol)];
        for t in candidates.into_iter().flatten() {
            if t < theta - 1e-9 || t > hi + 1e-9 {
                continue;
            }
            let (v, err) = self.value(t);
            let r = v.norm();
            if r + err <= threshold && found.map_or(true, |(_, fr)| r < fr) {
                found = Some((t, r));
            }
        }
        (found, fbest, evals + 4)
    }

    /// Certified scan of `[lo, hi]` within `budget` evaluations.
    pub fn scan(&self, lo: f64, hi: f64, budget: usize, tol: f64) -> ScanOutcome {
        let threshold = ZERO_RTOL * self.scale;
        let mut theta = lo;
        let mut min_modulus = f64::INFINITY;
        let mut evals = 0usize;
        let mut refined_until = f64::NEG_INFINITY;
        loop {
            let (v, err) = self.value(theta);
            evals += 1;
            let m = v.norm();
            min_modulus = min_modulus.min(m);
            if m <= threshold || (m < REFINE_RTOL * self.scale && theta > refined_until) {
                let (zero, local_min, used) = self.refine(theta, hi, m, tol);
                evals += used;
                if let Some((t, r)) = zero {
                    return ScanOutcome { zero: Some((t, r)), min_modulus: r, reached: t, complete: true, evals };
                }
                refined_until = theta + 3.0 * m / self.lip1.max(1e-300);
                min_modulus = min_modulus.min(local_min.max(0.0));
            }
            if theta >= hi {
                return ScanOutcome { zero: None, min_modulus, reached: hi, complete: true, evals };
            }
            let m_lo = (m - err).max(0.0);
            let mut step = STEP_SLACK * m_lo / self.lip1.max(1e-300);
            if let (Some(l2), Some(d)) = (self.lip2, self.derivative(theta)) {
                let dn = d.norm();
                let t = 2.0 * m_lo / (dn + (dn * dn + 2.0 * l2 * m_lo).sqrt());
                step = step.max(STEP_SLACK * t);
            }
            if evals >= budget || step <= 1e-15 * theta.abs().max(1.0) {
                return ScanOutcome { zero: None, min_modulus, reached: theta, complete: false, evals };
            }
            theta = (theta + step).min(hi);
        }
    }

    /// Parallel scan of `[lo, hi]` split into sub-windows; merged in window
    /// order so the result does not depend on scheduling.
    pub fn scan_parallel(&self, lo: f64, hi: f64, opts: &ScanOptions) -> ScanOutcome {
        let n = opts.windows.max(1);
        let budget = (opts.max_evals / n).max(1000);
        let edges: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
        let parts: Vec<ScanOutcome> =
            (0..n).into_par_iter().map(|k| self.scan(edges[k], edges[k + 1], budget, opts.tol)).collect();
        let evals = parts.iter().map(|p| p.evals).sum();
        if let Some(z) = parts.iter().find(|p| p.zero.is_some()) {
            return ScanOutcome { evals, ..*z };
        }
        let mut min_modulus = f64::INFINITY;
        for p in &parts {
            min_modulus = min_modulus.min(p.min_modulus);
            if !p.complete {
                return ScanOutcome { zero: None, min_modulus, reached: p.reached, complete: false, evals };
            }
        }
        ScanOutcome { zero: None, min_modulus, reached: hi, complete: true, evals }
    }
}
