//! The Mellin transform `M(theta) = int y^(alpha + i theta) rho(dy)` on the
//! vertical line `Re s = alpha`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::measures::{kernel_to_measure, AcPiece, Distribution, Kernel, SpectralMeasure};
use crate::quad::{self, Estimate};

/// One evaluation of a line transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinSample {
    pub theta: f64,
    pub value: Complex64,
    /// Quadrature error bound; zero for closed forms.
    pub abs_error: f64,
}

/// How transforms of absolutely continuous parts are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Closed forms where implemented, quadrature otherwise.
    #[default]
    Auto,
    /// Quadrature throughout, as an independent oracle.
    Quadrature,
}

/// Anything whose line transform can be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subject", rename_all = "snake_case")]
pub enum Subject {
    Measure { measure: SpectralMeasure },
    Dist { dist: Distribution },
    Kernel { kernel: Kernel },
}

fn cpow(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

fn line(alpha: f64, theta: f64) -> Complex64 {
    Complex64::new(alpha, theta)
}

/// `sum w_i x_i^alpha e^(i theta ln x_i)`.
pub fn eval_atoms(atoms: &[(f64, f64)], alpha: f64, theta: f64) -> Complex64 {
    eval_atoms_s(atoms, line(alpha, theta))
}

/// `sum w_i x_i^s` at an arbitrary complex `s`.
pub fn eval_atoms_s(atoms: &[(f64, f64)], s: Complex64) -> Complex64 {
    atoms.iter().map(|&(x, w)| w * cpow(x, s)).sum()
}

/// `d/dtheta` of [`eval_atoms`].
pub fn eval_atoms_derivative(atoms: &[(f64, f64)], alpha: f64, theta: f64) -> Complex64 {
    let s = line(alpha, theta);
    atoms.iter().map(|&(x, w)| w * Complex64::new(0.0, x.ln()) * cpow(x, s)).sum()
}

/// `sum w_i x_i^alpha |ln x_i|`, a Lipschitz constant of [`eval_atoms`].
pub fn atoms_derivative_bound(atoms: &[(f64, f64)], alpha: f64) -> f64 {
    atoms.iter().map(|&(x, w)| w * x.powf(alpha) * x.ln().abs()).sum()
}

/// `sum w_i x_i^alpha ln^2 x_i`, a bound on the second derivative.
pub fn atoms_second_derivative_bound(atoms: &[(f64, f64)], alpha: f64) -> f64 {
    atoms.iter().map(|&(x, w)| w * x.powf(alpha) * x.ln().powi(2)).sum()
}

fn ensure_finite_moment(m: f64, what: &dyn std::fmt::Display, p: f64) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::MomentDivergence { what: what.to_string(), order: p })
    }
}

/// Brute-force quadrature of `E[|Y|^s]`, ignoring closed forms.
pub fn quadrature_catalog(dist: &Distribution, s: Complex64) -> Estimate {
    let d = dist.magnitude();
    if let Some(atoms) = d.atoms() {
        return Estimate { value: eval_atoms_s(atoms, s), abs_error: 0.0 };
    }
    let (lo, hi) = d.log_support();
    let lg = |u: f64| d.log_density_of_log(u).unwrap_or(f64::NEG_INFINITY);
    let mut breaks = d.log_kinks();
    breaks.push(0.0);
    let mut e = quad::line_integral(&lg, s.re, s.im, lo, hi, &breaks);
    if let Distribution::Counterexample(law) = d {
        // the point mass at 1 contributes 1^s
        e.value += law.point_mass();
    }
    e
}

/// `E[|Y|^(alpha + i theta)]` for a catalog law.
pub fn eval_catalog(dist: &Distribution, alpha: f64, theta: f64) -> Result<MellinSample> {
    eval_catalog_with(dist, alpha, theta, EvalMode::Auto)
}

pub fn eval_catalog_with(dist: &Distribution, alpha: f64, theta: f64, mode: EvalMode) -> Result<MellinSample> {
    dist.validate()?;
    ensure_finite_moment(dist.moment(alpha), dist, alpha)?;
    let s = line(alpha, theta);
    let closed = match mode {
        EvalMode::Auto => dist.mellin_closed_form(s),
        EvalMode::Quadrature => None,
    };
    Ok(match closed {
        Some(value) => MellinSample { theta, value, abs_error: 0.0 },
        None => {
            let e = quadrature_catalog(dist, s);
            MellinSample { theta, value: e.value, abs_error: e.abs_error }
        }
    })
}

/// Direct quadrature of `int f(t)^s dt` over the time axis.
pub fn quadrature_kernel(kernel: &Kernel, s: Complex64) -> Estimate {
    if let Kernel::Step { pieces } = kernel {
        return Estimate { value: eval_atoms_s(pieces, s), abs_error: 0.0 };
    }
    let lambda = match kernel {
        Kernel::Exp { lambda } | Kernel::TwoSidedExp { lambda } | Kernel::Gaussian { lambda } => *lambda,
        Kernel::Step { .. } => unreachable!(),
    };
    let f = |t: f64| {
        let v = kernel.value(t);
        if v > 0.0 {
            (s * v.ln()).exp()
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    // beyond t_max the modulus f^Re(s) is below e^-42
    let (t_max, rate) = match kernel {
        Kernel::Gaussian { .. } => {
            let t = (42.0 / (lambda * s.re)).sqrt();
            (t, 2.0 * lambda * t)
        }
        _ => (42.0 / (lambda * s.re), lambda),
    };
    let width = (std::f64::consts::FRAC_PI_4 / (s.im.abs() * rate).max(1e-300)).min(t_max);
    let panels = (t_max / width).ceil() as usize;
    let mut acc = Estimate { value: Complex64::new(0.0, 0.0), abs_error: 0.0 };
    for k in 0..panels {
        let a = k as f64 * width;
        let b = ((k + 1) as f64 * width).min(t_max);
        let e = quad::adaptive_limited(&f, a, b, 1e-300, 1e-14, 100);
        acc.value += e.value;
        acc.abs_error += e.abs_error;
    }
    if !matches!(kernel, Kernel::Exp { .. }) {
        // even kernels: the negative half-line doubles the integral
        acc.value *= 2.0;
        acc.abs_error *= 2.0;
    }
    acc
}

/// `int f(t)^(alpha + i theta) dt`.
pub fn eval_kernel(kernel: &Kernel, alpha: f64, theta: f64) -> Result<MellinSample> {
    eval_kernel_with(kernel, alpha, theta, EvalMode::Auto)
}

pub fn eval_kernel_with(kernel: &Kernel, alpha: f64, theta: f64, mode: EvalMode) -> Result<MellinSample> {
    kernel.validate()?;
    ensure_finite_moment(kernel.power_integral(alpha), kernel, alpha)?;
    let s = line(alpha, theta);
    Ok(match mode {
        EvalMode::Auto => MellinSample { theta, value: kernel.mellin_closed_form(s), abs_error: 0.0 },
        EvalMode::Quadrature => {
            let e = quadrature_kernel(kernel, s);
            MellinSample { theta, value: e.value, abs_error: e.abs_error }
        }
    })
}

fn family_terms(measure: &SpectralMeasure, alpha: f64) -> Result<Vec<usize>> {
    measure.families.iter().map(|f| f.truncation(alpha)).collect()
}

/// Transform of a spectral measure at a complex `s`.
pub fn eval_measure_s(measure: &SpectralMeasure, s: Complex64, mode: EvalMode) -> Result<Estimate> {
    let mut value = eval_atoms_s(&measure.atoms, s);
    let mut abs_error = 0.0;
    for (f, k) in measure.families.iter().zip(family_terms(measure, s.re)?) {
        value += f.mellin(s, k);
    }
    for piece in &measure.ac_pieces {
        let closed = match mode {
            EvalMode::Auto => piece.mellin_closed_form(s),
            EvalMode::Quadrature => None,
        };
        match closed {
            Some(v) => value += v,
            None => {
                let e = piece.mellin_quadrature(s);
                value += e.value;
                abs_error += e.abs_error;
            }
        }
    }
    Ok(Estimate { value, abs_error })
}

pub fn eval_measure(measure: &SpectralMeasure, alpha: f64, theta: f64) -> Result<MellinSample> {
    eval_measure_with(measure, alpha, theta, EvalMode::Auto)
}

pub fn eval_measure_with(measure: &SpectralMeasure, alpha: f64, theta: f64, mode: EvalMode) -> Result<MellinSample> {
    measure.validate()?;
    ensure_finite_moment(moment(measure, alpha), &"spectral measure", alpha)?;
    let e = eval_measure_s(measure, line(alpha, theta), mode)?;
    Ok(MellinSample { theta, value: e.value, abs_error: e.abs_error })
}

impl Subject {
    pub fn validate(&self) -> Result<()> {
        match self {
            Subject::Measure { measure } => measure.validate(),
            Subject::Dist { dist } => dist.validate(),
            Subject::Kernel { kernel } => kernel.validate(),
        }
    }

    /// `int y^p rho(dy)`.
    pub fn moment(&self, p: f64) -> f64 {
        match self {
            Subject::Measure { measure } => moment(measure, p),
            Subject::Dist { dist } => dist.moment(p),
            Subject::Kernel { kernel } => kernel.power_integral(p),
        }
    }

    pub fn eval(&self, alpha: f64, theta: f64, mode: EvalMode) -> Result<MellinSample> {
        match self {
            Subject::Measure { measure } => eval_measure_with(measure, alpha, theta, mode),
            Subject::Dist { dist } => eval_catalog_with(dist, alpha, theta, mode),
            Subject::Kernel { kernel } => eval_kernel_with(kernel, alpha, theta, mode),
        }
    }

    /// Unchecked evaluation at complex `s`; callers validate first.
    pub fn eval_s(&self, s: Complex64, mode: EvalMode) -> Estimate {
        let exact = |value| Estimate { value, abs_error: 0.0 };
        match (self, mode) {
            (Subject::Measure { measure }, _) => eval_measure_s(measure, s, mode)
                .unwrap_or(Estimate { value: Complex64::new(f64::NAN, f64::NAN), abs_error: f64::INFINITY }),
            (Subject::Dist { dist }, EvalMode::Auto) => match dist.mellin_closed_form(s) {
                Some(v) => exact(v),
                None => quadrature_catalog(dist, s),
            },
            (Subject::Dist { dist }, EvalMode::Quadrature) => quadrature_catalog(dist, s),
            (Subject::Kernel { kernel }, EvalMode::Auto) => exact(kernel.mellin_closed_form(s)),
            (Subject::Kernel { kernel }, EvalMode::Quadrature) => quadrature_kernel(kernel, s),
        }
    }

    /// The spectral measure behind the subject, when it has a finite atomic
    /// one (discrete laws and step kernels).
    pub fn atomic_measure(&self) -> Option<SpectralMeasure> {
        match self {
            Subject::Measure { measure } if measure.families.is_empty() && measure.ac_pieces.is_empty() => {
                Some(measure.clone())
            }
            Subject::Dist { dist } => dist.magnitude().atoms().and_then(|a| SpectralMeasure::from_atoms(a).ok()),
            Subject::Kernel { kernel: k @ Kernel::Step { .. } } => kernel_to_measure(k).ok(),
            _ => None,
        }
    }

    /// `int y^alpha |ln y| rho(dy)`: a Lipschitz constant of `M` in `theta`.
    pub fn derivative_bound(&self, alpha: f64) -> f64 {
        let log_abs = |lg: &dyn Fn(f64) -> f64, lo: f64, hi: f64, breaks: &[f64]| -> f64 {
            let g = |u: f64| lg(u) + u.abs().max(1e-300).ln();
            let mut b = breaks.to_vec();
            b.push(0.0);
            quad::line_integral(&g, alpha, 0.0, lo, hi, &b).value.re
        };
        match self {
            Subject::Measure { measure } => {
                let mut total = atoms_derivative_bound(&measure.atoms, alpha);
                for f in &measure.families {
                    total += f.log_weighted_sum(alpha);
                }
                for piece in &measure.ac_pieces {
                    let (lo, hi) = piece.support();
                    let lg = |u: f64| piece.log_density_of_log(u);
                    let ulo = if lo > 0.0 { lo.ln() } else { f64::NEG_INFINITY };
                    let uhi = if hi.is_finite() { hi.ln() } else { f64::INFINITY };
                    total += match piece {
                        AcPiece::ExpKernelImage { coef } => coef / (alpha * alpha),
                        _ => log_abs(&lg, ulo, uhi, &[]),
                    };
                }
                total
            }
            Subject::Dist { dist } => {
                let d = dist.magnitude();
                if let Some(atoms) = d.atoms() {
                    return atoms_derivative_bound(atoms, alpha);
                }
                let (lo, hi) = d.log_support();
                let lg = |u: f64| d.log_density_of_log(u).unwrap_or(f64::NEG_INFINITY);
                // a point mass at 1 adds nothing since ln 1 = 0
                log_abs(&lg, lo, hi, &d.log_kinks())
            }
            Subject::Kernel { kernel } => match kernel {
                Kernel::Step { pieces } => atoms_derivative_bound(pieces, alpha),
                // int_0^inf e^{-a l t} l t dt = 1/(l a^2), doubled for even kernels
                Kernel::Exp { lambda } => 1.0 / (lambda * alpha * alpha),
                Kernel::TwoSidedExp { lambda } => 2.0 / (lambda * alpha * alpha),
                // int e^{-a l t^2} l t^2 dt = sqrt(pi) / (2 a^{3/2} sqrt(l))
                Kernel::Gaussian { lambda } => std::f64::consts::PI.sqrt() / (2.0 * alpha.powf(1.5) * lambda.sqrt()),
            },
        }
    }
}

/// `int y^p rho(dy)`, `INFINITY` on divergence.
pub fn moment(measure: &SpectralMeasure, p: f64) -> f64 {
    let atoms: f64 = measure.atoms.iter().map(|&(x, w)| w * x.powf(p)).sum();
    let families: f64 = measure.families.iter().map(|f| f.power_sum(p)).sum();
    let ac: f64 = measure.ac_pieces.iter().map(|piece| piece.moment(p)).sum();
    atoms + families + ac
}

/// The exponentially tilted law of `log Y`: density
/// `e^(alpha x) f_(log Y)(x) / E[Y^alpha]` plus tilted atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaConjugate {
    dist: Distribution,
    alpha: f64,
    norm: f64,
    /// `(log location, probability)` of the atomic part.
    pub atoms: Vec<(f64, f64)>,
}

impl AlphaConjugate {
    pub fn new(dist: &Distribution, alpha: f64) -> Result<Self> {
        dist.validate()?;
        let norm = dist.moment(alpha);
        ensure_finite_moment(norm, dist, alpha)?;
        let d = dist.magnitude();
        let raw: Vec<(f64, f64)> = match d {
            Distribution::Discrete { atoms } => atoms.clone(),
            Distribution::Counterexample(law) if law.point_mass() > 0.0 => vec![(1.0, law.point_mass())],
            _ => vec![],
        };
        let atoms = raw.iter().map(|&(x, w)| (x.ln(), w * x.powf(alpha) / norm)).collect();
        Ok(AlphaConjugate { dist: d.clone(), alpha, norm, atoms })
    }

    /// Whether the tilted law is purely atomic.
    pub fn is_atomic(&self) -> bool {
        self.dist.atoms().is_some()
    }

    /// Density of the absolutely continuous part at `x`.
    pub fn density(&self, x: f64) -> f64 {
        match self.dist.log_density_of_log(x) {
            Some(lg) if lg > f64::NEG_INFINITY => (self.alpha * x + lg).exp() / self.norm,
            _ => 0.0,
        }
    }
}

/// Value of the alpha-conjugate of `dist` at `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConjugateValue {
    Density(f64),
    /// The conjugate is purely atomic; `(log location, probability)`.
    Atomic(Vec<(f64, f64)>),
}

pub fn alpha_conjugate_density(dist: &Distribution, alpha: f64, x: f64) -> Result<ConjugateValue> {
    let c = AlphaConjugate::new(dist, alpha)?;
    if c.is_atomic() {
        return Ok(ConjugateValue::Atomic(c.atoms));
    }
    if !x.is_finite() {
        return Err(invalid("conjugate density needs finite x"));
    }
    Ok(ConjugateValue::Density(c.density(x)))
}
