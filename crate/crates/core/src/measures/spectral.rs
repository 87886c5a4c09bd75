//! Sigma-finite measures on `(0, inf)`: atoms, infinite atom families and
//! absolutely continuous pieces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quad::{self, Estimate};

/// Relative tolerance used when merging atoms at equal locations.
pub const MERGE_RTOL: f64 = 1e-12;

/// Tail budget of the truncation rule for infinite families: the dropped
/// part of `sum psi_j^(alpha - delta)` is at most this fraction of
/// `min(1, total)`.
pub const FAMILY_TAIL_BUDGET: f64 = 1e-6;

fn cpow(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

/// An infinite family of unit-mass atoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AtomFamily {
    /// Atoms at `first * ratio^j`, `j = 0, 1, ...`, with `0 < ratio < 1`.
    Geometric { first: f64, ratio: f64 },
    /// Atoms at `j^-exponent`, `j = 1, 2, ...`.
    PowerLaw { exponent: f64 },
}

impl AtomFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AtomFamily::Geometric { first, ratio } => {
                if !(first > 0.0 && first.is_finite() && ratio > 0.0 && ratio < 1.0) {
                    return Err(invalid(format!("geometric family needs first > 0, 0 < ratio < 1; got {first}, {ratio}")));
                }
            }
            AtomFamily::PowerLaw { exponent } => {
                if !(exponent > 0.0 && exponent.is_finite()) {
                    return Err(invalid(format!("power-law family needs exponent > 0, got {exponent}")));
                }
            }
        }
        Ok(())
    }

    /// Location of the `j`-th atom, `j >= 0`.
    pub fn location(&self, j: usize) -> f64 {
        match *self {
            AtomFamily::Geometric { first, ratio } => first * ratio.powi(j as i32),
            AtomFamily::PowerLaw { exponent } => ((j + 1) as f64).powf(-exponent),
        }
    }

    /// `sum_j psi_j^p`, `INFINITY` on divergence.
    pub fn power_sum(&self, p: f64) -> f64 {
        match *self {
            AtomFamily::Geometric { first, ratio } => {
                if p <= 0.0 {
                    f64::INFINITY
                } else {
                    first.powf(p) / (1.0 - ratio.powf(p))
                }
            }
            AtomFamily::PowerLaw { exponent } => {
                let gamma = exponent * p;
                if gamma <= 1.0 {
                    return f64::INFINITY;
                }
                let k = 10_000usize;
                let head: f64 = (1..=k).map(|j| (j as f64).powf(-gamma)).sum();
                head + (k as f64 + 0.5).powf(1.0 - gamma) / (gamma - 1.0)
            }
        }
    }

    /// Number of leading atoms kept under the truncation rule for the
    /// summability exponent `p = alpha - delta`.
    pub fn truncation(&self, p: f64) -> Result<usize> {
        let total = self.power_sum(p);
        if !total.is_finite() {
            return Err(Error::MomentDivergence { what: format!("{self:?}"), order: p });
        }
        let budget = FAMILY_TAIL_BUDGET * total.min(1.0);
        let k = match *self {
            AtomFamily::Geometric { first, ratio } => {
                // tail after K atoms: first^p r^{pK} / (1 - r^p)
                let rp = ratio.powf(p);
                let need = (budget * (1.0 - rp) / first.powf(p)).ln() / rp.ln();
                need.ceil().max(1.0) as usize
            }
            AtomFamily::PowerLaw { exponent } => {
                // sum_{j > K} j^-g <= K^{1-g} / (g - 1)
                let g = exponent * p;
                let need = (budget * (g - 1.0)).powf(-1.0 / (g - 1.0));
                need.ceil().max(1.0) as usize
            }
        };
        if k > 50_000_000 {
            return Err(invalid(format!("truncation needs {k} terms; family too slowly summable")));
        }
        Ok(k)
    }

    /// `sum_j psi_j^s`: closed form for geometric families, truncated sum plus
    /// an integral tail correction otherwise.
    pub fn mellin(&self, s: Complex64, k: usize) -> Complex64 {
        match *self {
            AtomFamily::Geometric { first, ratio } => cpow(first, s) / (1.0 - cpow(ratio, s)),
            AtomFamily::PowerLaw { exponent } => {
                let es = s * exponent;
                let head: Complex64 = (1..=k).map(|j| cpow(j as f64, -es)).sum();
                let edge = k as f64 + 0.5;
                head + cpow(edge, 1.0 - es) / (es - 1.0)
            }
        }
    }

    /// `sum_j psi_j^alpha |ln psi_j|`, a Lipschitz constant in `theta`.
    pub fn log_weighted_sum(&self, alpha: f64) -> f64 {
        let mut total = 0.0;
        let mut j = 0usize;
        loop {
            let x = self.location(j);
            let term = x.powf(alpha) * x.ln().abs();
            total += term;
            j += 1;
            if j > 64 && term < 1e-18 * total {
                break;
            }
            if j > 20_000_000 {
                break;
            }
        }
        total
    }
}

/// An absolutely continuous piece of a spectral measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AcPiece {
    /// Density `c y^-(p+1)` on `(lo, hi)`; `hi = None` means infinity.
    TruncatedPower { c: f64, p: f64, lo: f64, hi: Option<f64> },
    /// Density `coef / y` on `(0, 1)`: the image of Lebesgue measure under
    /// an exponential kernel.
    ExpKernelImage { coef: f64 },
    /// Density `1 / (y sqrt(-lambda ln y))` on `(0, 1)`: the image of Lebesgue
    /// measure under `s -> exp(-lambda s^2)`.
    GaussianKernelImage { lambda: f64 },
    /// Piecewise-linear density through `(xs[k], density[k])`.
    Tabulated { xs: Vec<f64>, density: Vec<f64> },
}

impl AcPiece {
    pub fn validate(&self) -> Result<()> {
        match self {
            AcPiece::TruncatedPower { c, lo, hi, .. } => {
                if !(*c > 0.0 && *lo > 0.0 && hi.map_or(true, |h| h > *lo)) {
                    return Err(invalid("truncated power piece needs c > 0 and 0 < lo < hi"));
                }
            }
            AcPiece::ExpKernelImage { coef } => {
                if !(*coef > 0.0) {
                    return Err(invalid("exponential kernel image needs coef > 0"));
                }
            }
            AcPiece::GaussianKernelImage { lambda } => {
                if !(*lambda > 0.0) {
                    return Err(invalid("gaussian kernel image needs lambda > 0"));
                }
            }
            AcPiece::Tabulated { xs, density } => {
                if xs.len() < 2 || xs.len() != density.len() {
                    return Err(invalid("tabulated piece needs matching xs/density of length >= 2"));
                }
                if xs[0] <= 0.0 || xs.windows(2).any(|w| w[1] <= w[0]) || density.iter().any(|&d| d < 0.0) {
                    return Err(invalid("tabulated piece needs increasing positive xs and nonnegative density"));
                }
            }
        }
        Ok(())
    }

    /// Support `(lo, hi)` on `(0, inf)`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            AcPiece::TruncatedPower { lo, hi, .. } => (*lo, hi.unwrap_or(f64::INFINITY)),
            AcPiece::ExpKernelImage { .. } | AcPiece::GaussianKernelImage { .. } => (0.0, 1.0),
            AcPiece::Tabulated { xs, .. } => (xs[0], xs[xs.len() - 1]),
        }
    }

    pub fn density(&self, y: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(y > lo && y < hi) {
            return 0.0;
        }
        match self {
            AcPiece::TruncatedPower { c, p, .. } => c * y.powf(-(p + 1.0)),
            AcPiece::ExpKernelImage { coef } => coef / y,
            AcPiece::GaussianKernelImage { lambda } => 1.0 / (y * (-lambda * y.ln()).sqrt()),
            AcPiece::Tabulated { xs, density } => {
                let k = xs.partition_point(|&x| x <= y).clamp(1, xs.len() - 1);
                let t = (y - xs[k - 1]) / (xs[k] - xs[k - 1]);
                density[k - 1] * (1.0 - t) + density[k] * t
            }
        }
    }

    /// Log of the density of the image under `ln`, at `u`.
    pub fn log_density_of_log(&self, u: f64) -> f64 {
        let d = self.density(u.exp());
        if d > 0.0 {
            d.ln() + u
        } else {
            f64::NEG_INFINITY
        }
    }

    fn log_kinks(&self) -> Vec<f64> {
        match self {
            AcPiece::Tabulated { xs, .. } => xs.iter().map(|x| x.ln()).collect(),
            _ => {
                let (lo, hi) = self.support();
                [lo, hi].into_iter().filter(|v| *v > 0.0 && v.is_finite()).map(f64::ln).collect()
            }
        }
    }

    /// `int y^p rho(dy)` over this piece; `INFINITY` on divergence.
    pub fn moment(&self, p: f64) -> f64 {
        match self {
            AcPiece::TruncatedPower { c, p: q, lo, hi } => {
                let k = p - q;
                match hi {
                    None if k >= 0.0 => f64::INFINITY,
                    None => -c * lo.powf(k) / k,
                    Some(h) if k.abs() < 1e-15 => c * (h / lo).ln(),
                    Some(h) => c * (h.powf(k) - lo.powf(k)) / k,
                }
            }
            AcPiece::ExpKernelImage { coef } => {
                if p > 0.0 {
                    coef / p
                } else {
                    f64::INFINITY
                }
            }
            AcPiece::GaussianKernelImage { lambda } => {
                if p <= 0.0 {
                    return f64::INFINITY;
                }
                self.gaussian_line(*lambda, Complex64::new(p, 0.0)).value.re
            }
            AcPiece::Tabulated { xs, .. } => {
                let f = |y: f64| y.powf(p) * self.density(y);
                quad::adaptive_real_pieces(f, xs, 1e-300, 1e-13).0
            }
        }
    }

    /// Closed-form `int y^s rho(dy)`, where one is implemented.
    pub fn mellin_closed_form(&self, s: Complex64) -> Option<Complex64> {
        match self {
            AcPiece::TruncatedPower { c, p, lo, hi } => {
                let k = s - *p;
                Some(match hi {
                    None => -*c * cpow(*lo, k) / k,
                    Some(h) if k.norm() < 1e-14 => Complex64::new(c * (h / lo).ln(), 0.0),
                    Some(h) => *c * (cpow(*h, k) - cpow(*lo, k)) / k,
                })
            }
            AcPiece::ExpKernelImage { coef } => Some(*coef / s),
            _ => None,
        }
    }

    /// `int_0^inf e^{-s t^2} (2 / sqrt(lambda)) dt`: the Gaussian-image transform
    /// after `y = exp(-t^2)`, which removes the endpoint singularity.
    fn gaussian_line(&self, lambda: f64, s: Complex64) -> Estimate {
        let scale = 2.0 / lambda.sqrt();
        let f = |t: f64| (-s * t * t).exp() * scale;
        // beyond t_max the modulus is below e^{-40}
        let t_max = (40.0 / s.re).sqrt();
        let panels = ((2.0 * s.im.abs() * t_max * t_max / std::f64::consts::FRAC_PI_4).ceil() as usize).clamp(1, 200_000);
        let mut acc = Estimate { value: Complex64::new(0.0, 0.0), abs_error: 0.0 };
        // equal steps in t^2, so each panel spans the same phase increment
        for k in 0..panels {
            let a = t_max * (k as f64 / panels as f64).sqrt();
            let b = t_max * ((k + 1) as f64 / panels as f64).sqrt();
            let e = quad::adaptive_limited(&f, a, b, 1e-300, 1e-14, 200);
            acc.value += e.value;
            acc.abs_error += e.abs_error;
        }
        acc
    }

    /// `int y^s rho(dy)` by quadrature, ignoring any closed form.
    pub fn mellin_quadrature(&self, s: Complex64) -> Estimate {
        if let AcPiece::GaussianKernelImage { lambda } = self {
            return self.gaussian_line(*lambda, s);
        }
        let (lo, hi) = self.support();
        let lg = |u: f64| self.log_density_of_log(u);
        let ulo = if lo > 0.0 { lo.ln() } else { f64::NEG_INFINITY };
        let uhi = if hi.is_finite() { hi.ln() } else { f64::INFINITY };
        quad::line_integral(&lg, s.re, s.im, ulo, uhi, &self.log_kinks())
    }
}

/// A sigma-finite measure on `(0, inf)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpectralMeasure {
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<AtomFamily>,
    #[serde(default)]
    pub ac_pieces: Vec<AcPiece>,
}

impl SpectralMeasure {
    /// Atoms merged at equal locations and sorted by location.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        let m = SpectralMeasure { atoms: merge_atoms(atoms), ..Default::default() };
        m.validate()?;
        Ok(m)
    }

    /// Unit masses at the given weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let atoms: Vec<(f64, f64)> = weights.iter().map(|&w| (w, 1.0)).collect();
        Self::from_atoms(&atoms)
    }

    pub fn from_family(family: AtomFamily) -> Result<Self> {
        family.validate()?;
        Ok(SpectralMeasure { families: vec![family], ..Default::default() })
    }

    pub fn from_piece(piece: AcPiece) -> Result<Self> {
        piece.validate()?;
        Ok(SpectralMeasure { ac_pieces: vec![piece], ..Default::default() })
    }

    pub fn validate(&self) -> Result<()> {
        for &(x, w) in &self.atoms {
            if !(x > 0.0 && x.is_finite() && w > 0.0 && w.is_finite()) {
                return Err(invalid(format!("atom ({x}, {w}) must have positive finite location and mass")));
            }
        }
        let mut locs: Vec<f64> = self.atoms.iter().map(|a| a.0).collect();
        locs.sort_by(f64::total_cmp);
        if locs.windows(2).any(|w| w[1] - w[0] <= MERGE_RTOL * w[1]) {
            return Err(invalid("atom locations must be distinct; merge them first"));
        }
        for f in &self.families {
            f.validate()?;
        }
        for p in &self.ac_pieces {
            p.validate()?;
        }
        if self.atoms.is_empty() && self.families.is_empty() && self.ac_pieces.is_empty() {
            return Err(invalid("measure is zero"));
        }
        Ok(())
    }

    pub fn is_finite_atomic(&self) -> bool {
        self.families.is_empty() && self.ac_pieces.is_empty() && !self.atoms.is_empty()
    }

    /// Upper end of the support, `INFINITY` when unbounded.
    pub fn upper_support(&self) -> f64 {
        let mut hi: f64 = 0.0;
        for &(x, _) in &self.atoms {
            hi = hi.max(x);
        }
        for f in &self.families {
            hi = hi.max(match f {
                AtomFamily::Geometric { first, .. } => *first,
                AtomFamily::PowerLaw { .. } => 1.0,
            });
        }
        for p in &self.ac_pieces {
            hi = hi.max(p.support().1);
        }
        hi
    }

    /// `int_(0,1] y^p rho(dy)`, `INFINITY` on divergence.
    pub fn moment_below_one(&self, p: f64) -> f64 {
        let mut total: f64 = self.atoms.iter().filter(|a| a.0 <= 1.0).map(|&(x, w)| w * x.powf(p)).sum();
        for f in &self.families {
            // every family atom lies in (0, 1] once past the first few
            let mut head = 0.0;
            let mut j = 0;
            while f.location(j) > 1.0 {
                head += f.location(j).powf(p);
                j += 1;
            }
            total += f.power_sum(p) - head;
        }
        for piece in &self.ac_pieces {
            let (lo, hi) = piece.support();
            let below = match piece {
                AcPiece::TruncatedPower { c, p: q, lo, .. } => {
                    if hi <= 1.0 {
                        piece.moment(p)
                    } else if *lo >= 1.0 {
                        0.0
                    } else {
                        AcPiece::TruncatedPower { c: *c, p: *q, lo: *lo, hi: Some(1.0) }.moment(p)
                    }
                }
                _ if hi <= 1.0 => piece.moment(p),
                _ => {
                    let f = |y: f64| y.powf(p) * piece.density(y);
                    quad::adaptive_real(f, lo, 1.0, 1e-300, 1e-12).0
                }
            };
            total += below;
        }
        total
    }
}

/// Merges atoms whose locations agree to [`MERGE_RTOL`], summing masses.
pub fn merge_atoms(atoms: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut sorted = atoms.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for (x, w) in sorted {
        match out.last_mut() {
            Some(last) if (x - last.0).abs() <= MERGE_RTOL * x.abs().max(last.0.abs()) => last.1 += w,
            _ => out.push((x, w)),
        }
    }
    out
}

/// The power measure `nu_alpha` with density `|alpha| x^-(alpha+1)`
/// (`x^-1` when `alpha = 0`).
///
/// Only `alpha >= 0` enters the filter checks; for negative `alpha` the roles
/// of head and tail swap and the measure is housed but not analysed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerMeasure {
    pub alpha: f64,
}

impl PowerMeasure {
    pub fn density(&self, x: f64) -> f64 {
        if self.alpha == 0.0 {
            1.0 / x
        } else {
            self.alpha.abs() * x.powf(-(self.alpha + 1.0))
        }
    }

    /// `nu_alpha(x, inf)`: `x^-alpha` for `alpha > 0`, infinite otherwise.
    pub fn tail(&self, x: f64) -> f64 {
        if self.alpha > 0.0 {
            x.powf(-self.alpha)
        } else {
            f64::INFINITY
        }
    }

    /// `int_(0,1] y^p nu_alpha(dy)`.
    pub fn moment_below_one(&self, p: f64) -> f64 {
        if p > self.alpha {
            let scale = if self.alpha == 0.0 { 1.0 } else { self.alpha.abs() };
            scale / (p - self.alpha)
        } else {
            f64::INFINITY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merging_sums_masses() {
        let m = SpectralMeasure::from_weights(&[0.5, 1.0, 0.5]).unwrap();
        assert_eq!(m.atoms, vec![(0.5, 2.0), (1.0, 1.0)]);
        assert!(SpectralMeasure { atoms: vec![(1.0, 1.0), (1.0, 2.0)], ..Default::default() }.validate().is_err());
        assert!(SpectralMeasure::from_atoms(&[(0.0, 1.0)]).is_err());
        assert!(SpectralMeasure::from_atoms(&[(1.0, -1.0)]).is_err());
    }

    #[test]
    fn geometric_truncation_rule() {
        let f = AtomFamily::Geometric { first: 0.5, ratio: 0.5 };
        let p = 0.5;
        let k = f.truncation(p).unwrap();
        let total = f.power_sum(p);
        let head: f64 = (0..k).map(|j| f.location(j).powf(p)).sum();
        assert!(total - head <= FAMILY_TAIL_BUDGET * total.min(1.0) * (1.0 + 1e-9));
        let head_short: f64 = (0..k - 1).map(|j| f.location(j).powf(p)).sum();
        assert!(total - head_short > FAMILY_TAIL_BUDGET * total.min(1.0));
    }

    #[test]
    fn power_law_family() {
        let f = AtomFamily::PowerLaw { exponent: 2.0 };
        // sum j^-2 = pi^2/6
        assert!((f.power_sum(1.0) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-9);
        assert_eq!(f.power_sum(0.5), f64::INFINITY);
        assert!(f.truncation(0.5).is_err());
        let k = f.truncation(0.9).unwrap();
        let s = Complex64::new(1.0, 0.0);
        assert!((f.mellin(s, k).re - f.power_sum(1.0)).abs() < 1e-8);
    }

    #[test]
    fn piece_moments() {
        let piece = AcPiece::TruncatedPower { c: 1.0, p: 1.0, lo: 1.0, hi: None };
        assert!((piece.moment(0.5) - 2.0).abs() < 1e-15);
        assert_eq!(piece.moment(1.0), f64::INFINITY);
        let e = AcPiece::ExpKernelImage { coef: 1.0 };
        assert!((e.moment(1.5) - 1.0 / 1.5).abs() < 1e-15);
        let g = AcPiece::GaussianKernelImage { lambda: 2.0 };
        // int exp(-2 p s^2) ds = sqrt(pi / (2 p))
        assert!((g.moment(1.0) - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn quadrature_agrees_with_closed_forms_for_pieces() {
        let pieces = [
            AcPiece::TruncatedPower { c: 2.0, p: 1.0, lo: 1.0, hi: Some(30.0) },
            AcPiece::TruncatedPower { c: 1.0, p: 2.0, lo: 0.5, hi: None },
            AcPiece::ExpKernelImage { coef: 0.5 },
        ];
        for piece in &pieces {
            for &theta in &[0.0, 1.0, 7.5] {
                let s = Complex64::new(1.0, theta);
                let q = piece.mellin_quadrature(s).value;
                let c = piece.mellin_closed_form(s).unwrap();
                assert!((q - c).norm() < 1e-9 * c.norm().max(1e-3), "{piece:?} theta {theta}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn tabulated_density_integrates() {
        let piece = AcPiece::Tabulated { xs: vec![1.0, 2.0, 4.0], density: vec![0.0, 1.0, 0.0] };
        // triangle areas: 0.5 + 1.0
        assert!((piece.moment(0.0) - 1.5).abs() < 1e-12);
        let q = piece.mellin_quadrature(Complex64::new(0.0, 0.0)).value;
        assert!((q.re - 1.5).abs() < 1e-10);
    }

    #[test]
    fn power_measure() {
        let nu = PowerMeasure { alpha: 1.0 };
        assert_eq!(nu.tail(2.0), 0.5);
        assert!((nu.moment_below_one(1.5) - 2.0).abs() < 1e-15);
        assert_eq!(nu.moment_below_one(1.0), f64::INFINITY);
        assert_eq!(PowerMeasure { alpha: 0.0 }.tail(3.0), f64::INFINITY);
    }
}
