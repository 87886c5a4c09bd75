//! Integration kernels `f >= 0` of stochastic integrals and their images
//! `rho = Leb o f^-1`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::spectral::{merge_atoms, AcPiece, SpectralMeasure};
use crate::error::{invalid, Error, Result};

/// Largest fraction of `int f^alpha` allowed outside the simulation horizon.
pub const HORIZON_MASS_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kernel {
    /// Value `pieces[k].0` on consecutive intervals of length `pieces[k].1`
    /// laid out from `s = 0`.
    Step { pieces: Vec<(f64, f64)> },
    /// `exp(-lambda s) 1(s > 0)`.
    Exp { lambda: f64 },
    /// `exp(-lambda |s|)`.
    TwoSidedExp { lambda: f64 },
    /// `exp(-lambda s^2)`.
    Gaussian { lambda: f64 },
}

impl Kernel {
    /// Unit-length steps with the given values: the weighted-sum reduction.
    pub fn from_weights(weights: &[f64]) -> Self {
        Kernel::Step { pieces: weights.iter().map(|&w| (w, 1.0)).collect() }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Kernel::Step { pieces } => {
                if pieces.is_empty() {
                    return Err(invalid("step kernel needs at least one piece"));
                }
                for &(v, m) in pieces {
                    if !(v > 0.0 && v.is_finite() && m > 0.0 && m.is_finite()) {
                        return Err(invalid(format!("step piece ({v}, {m}) needs positive finite value and length")));
                    }
                }
            }
            Kernel::Exp { lambda } | Kernel::TwoSidedExp { lambda } | Kernel::Gaussian { lambda } => {
                if !(*lambda > 0.0 && lambda.is_finite()) {
                    return Err(invalid(format!("kernel rate must be positive, got {lambda}")));
                }
            }
        }
        Ok(())
    }

    /// `f(s)`.
    pub fn value(&self, s: f64) -> f64 {
        match self {
            Kernel::Step { pieces } => {
                if s < 0.0 {
                    return 0.0;
                }
                let mut start = 0.0;
                for &(v, m) in pieces {
                    if s < start + m {
                        return v;
                    }
                    start += m;
                }
                0.0
            }
            Kernel::Exp { lambda } => {
                if s > 0.0 {
                    (-lambda * s).exp()
                } else {
                    0.0
                }
            }
            Kernel::TwoSidedExp { lambda } => (-lambda * s.abs()).exp(),
            Kernel::Gaussian { lambda } => (-lambda * s * s).exp(),
        }
    }

    /// Closure of `{f > 0}` as an interval.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Kernel::Step { pieces } => (0.0, pieces.iter().map(|p| p.1).sum()),
            Kernel::Exp { .. } => (0.0, f64::INFINITY),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `int f(s)^p ds`, `INFINITY` on divergence.
    pub fn power_integral(&self, p: f64) -> f64 {
        match self {
            Kernel::Step { pieces } => pieces.iter().map(|&(v, m)| m * v.powf(p)).sum(),
            _ if p <= 0.0 => f64::INFINITY,
            Kernel::Exp { lambda } => 1.0 / (lambda * p),
            Kernel::TwoSidedExp { lambda } => 2.0 / (lambda * p),
            Kernel::Gaussian { lambda } => (std::f64::consts::PI / (lambda * p)).sqrt(),
        }
    }

    /// `int_{|s| > h} f(s)^p ds`.
    pub fn power_integral_outside(&self, p: f64, h: f64) -> f64 {
        match self {
            Kernel::Step { pieces } => {
                let mut start = 0.0;
                let mut out = 0.0;
                for &(v, m) in pieces {
                    let end = start + m;
                    out += v.powf(p) * (end - start.max(h)).max(0.0);
                    start = end;
                }
                out
            }
            _ if p <= 0.0 => f64::INFINITY,
            Kernel::Exp { lambda } => (-lambda * p * h).exp() / (lambda * p),
            Kernel::TwoSidedExp { lambda } => 2.0 * (-lambda * p * h).exp() / (lambda * p),
            Kernel::Gaussian { lambda } => {
                let k = lambda * p;
                (std::f64::consts::PI / k).sqrt() * erfc(k.sqrt() * h)
            }
        }
    }

    /// Checks that `[-h, h]` carries all but [`HORIZON_MASS_FRACTION`] of
    /// `int f^alpha`.
    pub fn check_horizon(&self, alpha: f64, h: f64) -> Result<f64> {
        let total = self.power_integral(alpha);
        let fraction = self.power_integral_outside(alpha, h) / total;
        if fraction > HORIZON_MASS_FRACTION {
            return Err(Error::HorizonTooSmall { horizon: h, fraction });
        }
        Ok(fraction)
    }

    /// Integrability of `f^(alpha-delta)` together with `f^2` (`alpha < 2`)
    /// or `f^(alpha+delta)` (`alpha >= 2`).
    pub fn check_integrability(&self, alpha: f64, delta: f64) -> Result<()> {
        let upper = if alpha < 2.0 { 2.0 } else { alpha + delta };
        for p in [alpha - delta, upper] {
            if !self.power_integral(p).is_finite() {
                return Err(Error::MomentDivergence { what: format!("kernel {self}"), order: p });
            }
        }
        Ok(())
    }

    /// Closed form of `int f(s)^s ds` where available.
    pub fn mellin_closed_form(&self, s: Complex64) -> Complex64 {
        match self {
            Kernel::Step { pieces } => pieces.iter().map(|&(v, m)| m * (s * v.ln()).exp()).sum(),
            Kernel::Exp { lambda } => 1.0 / (s * *lambda),
            Kernel::TwoSidedExp { lambda } => 2.0 / (s * *lambda),
            Kernel::Gaussian { lambda } => (std::f64::consts::PI / (s * *lambda)).sqrt(),
        }
    }
}

/// The image `rho = Leb o f^-1` of Lebesgue measure under the kernel.
pub fn kernel_to_measure(kernel: &Kernel) -> Result<SpectralMeasure> {
    kernel.validate()?;
    let m = match kernel {
        Kernel::Step { pieces } => SpectralMeasure { atoms: merge_atoms(pieces), ..Default::default() },
        Kernel::Exp { lambda } => SpectralMeasure::from_piece(AcPiece::ExpKernelImage { coef: 1.0 / lambda })?,
        Kernel::TwoSidedExp { lambda } => SpectralMeasure::from_piece(AcPiece::ExpKernelImage { coef: 2.0 / lambda })?,
        Kernel::Gaussian { lambda } => SpectralMeasure::from_piece(AcPiece::GaussianKernelImage { lambda: *lambda })?,
    };
    m.validate()?;
    Ok(m)
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Step { pieces } => {
                let parts: Vec<String> = pieces.iter().map(|(v, m)| format!("{v},{m}")).collect();
                write!(f, "step:{}", parts.join(","))
            }
            Kernel::Exp { lambda } => write!(f, "exp:{lambda}"),
            Kernel::TwoSidedExp { lambda } => write!(f, "twosided:{lambda}"),
            Kernel::Gaussian { lambda } => write!(f, "gauss:{lambda}"),
        }
    }
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad number {t:?}: {e}"))))
        .collect()
}

impl FromStr for Kernel {
    type Err = Error;

    /// Accepts `exp:L`, `twosided:L`, `gauss:L`, `step:v1,m1,...`,
    /// `weights:w1,w2,...` (unit steps) or a JSON object.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let k = if s.starts_with('{') {
            serde_json::from_str(s)?
        } else {
            let (name, args) = s.split_once(':').unwrap_or((s, ""));
            let one = |args: &str| -> Result<f64> {
                match numbers(args)?.as_slice() {
                    [v] => Ok(*v),
                    _ => Err(Error::Parse(format!("kernel {name} takes one parameter"))),
                }
            };
            match name {
                "exp" | "ou" => Kernel::Exp { lambda: one(args)? },
                "twosided" | "two-sided" => Kernel::TwoSidedExp { lambda: one(args)? },
                "gauss" | "gaussian" => Kernel::Gaussian { lambda: one(args)? },
                "weights" => Kernel::from_weights(&numbers(args)?),
                "step" => {
                    let v = numbers(args)?;
                    if v.len() % 2 != 0 {
                        return Err(Error::Parse("step kernel takes value,length pairs".into()));
                    }
                    Kernel::Step { pieces: v.chunks(2).map(|c| (c[0], c[1])).collect() }
                }
                _ => return Err(Error::Parse(format!("unknown kernel {name:?}"))),
            }
        };
        k.validate()?;
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn step_image_is_atoms() {
        let m = kernel_to_measure(&"step:1,3".parse().unwrap()).unwrap();
        assert_eq!(m.atoms, vec![(1.0, 3.0)]);
        let w = [0.3, 0.5, 1.0];
        let m = kernel_to_measure(&Kernel::from_weights(&w)).unwrap();
        assert_eq!(m.atoms, vec![(0.3, 1.0), (0.5, 1.0), (1.0, 1.0)]);
    }

    #[test]
    fn exp_image_moment() {
        let k = Kernel::Exp { lambda: 1.0 };
        let m = kernel_to_measure(&k).unwrap();
        for alpha in [0.5, 1.0, 1.7] {
            let img = m.ac_pieces[0].moment(alpha);
            let direct = quad::adaptive_real(|s: f64| k.value(s).powf(alpha), 0.0, 200.0, 1e-300, 1e-13).0;
            assert!((img - 1.0 / alpha).abs() < 1e-12);
            assert!((direct - img).abs() < 1e-8);
        }
    }

    #[test]
    fn images_preserve_moments() {
        for k in [Kernel::TwoSidedExp { lambda: 0.7 }, Kernel::Gaussian { lambda: 1.3 }] {
            let m = kernel_to_measure(&k).unwrap();
            for alpha in [0.5, 1.0, 2.5] {
                let img = m.ac_pieces[0].moment(alpha);
                let direct = quad::adaptive_real_pieces(|s: f64| k.value(s).powf(alpha), &[-100.0, 0.0, 100.0], 1e-300, 1e-13).0;
                assert!((img - direct).abs() < 1e-8, "{k} alpha {alpha}: {img} vs {direct}");
                assert!((img - k.power_integral(alpha)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn horizon_and_integrability() {
        let k = Kernel::Exp { lambda: 1.0 };
        assert!(k.check_horizon(1.0, 5.0).is_ok());
        assert!(matches!(k.check_horizon(1.0, 2.0), Err(Error::HorizonTooSmall { .. })));
        assert!(k.check_integrability(1.0, 0.5).is_ok());
        assert!(k.check_integrability(1.0, 1.0).is_err());
        let step = Kernel::from_weights(&[0.5, 1.0]);
        assert!((step.power_integral_outside(1.0, 1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["exp:2", "twosided:0.5", "gauss:1", "step:0.5,1,1,2"] {
            let k: Kernel = s.parse().unwrap();
            assert_eq!(k.to_string().parse::<Kernel>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json.parse::<Kernel>().unwrap(), k);
        }
        assert!("exp:-1".parse::<Kernel>().is_err());
        assert!("wave:1".parse::<Kernel>().is_err());
    }
}
