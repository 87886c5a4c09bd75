//! Linear filter descriptions: weighted sums, products and kernel integrals.

use serde::{Deserialize, Serialize};

use super::dist::Distribution;
use super::kernel::Kernel;
use super::spectral::{AtomFamily, SpectralMeasure};
use crate::error::{invalid, Error, Result};

/// Filter coefficients `psi_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weights {
    Finite { values: Vec<f64> },
    Generated { family: AtomFamily },
}

impl Weights {
    pub fn finite(values: &[f64]) -> Self {
        Weights::Finite { values: values.to_vec() }
    }

    pub fn geometric(first: f64, ratio: f64) -> Self {
        Weights::Generated { family: AtomFamily::Geometric { first, ratio } }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Weights::Finite { values } => {
                if values.is_empty() {
                    return Err(invalid("no weights given"));
                }
                if let Some(w) = values.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
                    return Err(invalid(format!("weights must be positive and finite, got {w}")));
                }
                Ok(())
            }
            Weights::Generated { family } => family.validate(),
        }
    }

    /// `sum psi_j^p`.
    pub fn power_sum(&self, p: f64) -> f64 {
        match self {
            Weights::Finite { values } => values.iter().map(|w| w.powf(p)).sum(),
            Weights::Generated { family } => family.power_sum(p),
        }
    }

    /// The coefficients as a list, generators truncated for summability
    /// exponent `p`.
    pub fn truncated(&self, p: f64) -> Result<Vec<f64>> {
        match self {
            Weights::Finite { values } => Ok(values.clone()),
            Weights::Generated { family } => {
                let k = family.truncation(p)?;
                Ok((0..k).map(|j| family.location(j)).collect())
            }
        }
    }

    /// Unit masses at the coefficients.
    pub fn to_measure(&self) -> Result<SpectralMeasure> {
        self.validate()?;
        match self {
            Weights::Finite { values } => SpectralMeasure::from_weights(values),
            Weights::Generated { family } => SpectralMeasure::from_family(*family),
        }
    }

    /// Parses `w1,w2,...`, `geom:first,ratio` or `powerlaw:exponent`.
    pub fn parse(s: &str) -> Result<Self> {
        let nums = |t: &str| -> Result<Vec<f64>> {
            t.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad weight {x:?}: {e}"))))
                .collect()
        };
        let w = match s.trim().split_once(':') {
            Some(("geom", args)) => match nums(args)?.as_slice() {
                [first, ratio] => Weights::geometric(*first, *ratio),
                _ => return Err(Error::Parse("geom takes first,ratio".into())),
            },
            Some(("powerlaw", args)) => match nums(args)?.as_slice() {
                [e] => Weights::Generated { family: AtomFamily::PowerLaw { exponent: *e } },
                _ => return Err(Error::Parse("powerlaw takes one exponent".into())),
            },
            Some((name, _)) => return Err(Error::Parse(format!("unknown weight generator {name:?}"))),
            None => Weights::Finite { values: nums(s)? },
        };
        w.validate()?;
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FilterKind {
    WeightedSum { weights: Weights },
    Product { factor: Distribution },
    KernelIntegral { kernel: Kernel },
}

/// A linear filter together with its target exponent `alpha` and the slack
/// `delta` of the moment conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterModel {
    pub kind: FilterKind,
    pub alpha: f64,
    pub delta: f64,
}

impl FilterModel {
    /// Builds and validates; `delta` defaults to `alpha / 2`.
    pub fn new(kind: FilterKind, alpha: f64, delta: Option<f64>) -> Result<Self> {
        let m = FilterModel { kind, alpha, delta: delta.unwrap_or(alpha / 2.0) };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let (alpha, delta) = (self.alpha, self.delta);
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid(format!("alpha must be positive, got {alpha}")));
        }
        if !(delta > 0.0 && delta < alpha) {
            return Err(invalid(format!("delta must lie in (0, alpha), got {delta}")));
        }
        match &self.kind {
            FilterKind::WeightedSum { weights } => {
                weights.validate()?;
                let p = alpha - delta;
                if !weights.power_sum(p).is_finite() {
                    return Err(Error::MomentDivergence { what: "sum of weights".into(), order: p });
                }
            }
            FilterKind::Product { factor } => {
                factor.validate()?;
                let p = alpha + delta;
                if !factor.moment(p).is_finite() {
                    return Err(Error::MomentDivergence { what: factor.to_string(), order: p });
                }
            }
            FilterKind::KernelIntegral { kernel } => {
                kernel.validate()?;
                kernel.check_integrability(alpha, delta)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_parse() {
        assert_eq!(Weights::parse("0.5, 0.5,1").unwrap(), Weights::finite(&[0.5, 0.5, 1.0]));
        assert_eq!(Weights::parse("geom:0.5,0.5").unwrap(), Weights::geometric(0.5, 0.5));
        assert!(Weights::parse("0.5,-1").is_err());
        assert!(Weights::parse("geom:1,2").is_err());
        assert!(Weights::parse("fib:1").is_err());
    }

    #[test]
    fn truncated_geometric() {
        let w = Weights::geometric(0.5, 0.5);
        let v = w.truncated(0.5).unwrap();
        assert_eq!(v[0], 0.5);
        assert!(v.len() > 20 && v.len() < 200);
    }

    #[test]
    fn model_conditions() {
        let sum = FilterKind::WeightedSum { weights: Weights::finite(&[1.0, 0.5]) };
        assert!(FilterModel::new(sum, 1.0, None).is_ok());
        let slow = FilterKind::WeightedSum { weights: Weights::Generated { family: AtomFamily::PowerLaw { exponent: 1.5 } } };
        // sum j^{-1.5 * 0.5} diverges
        assert!(matches!(FilterModel::new(slow, 1.0, Some(0.5)), Err(Error::MomentDivergence { .. })));
        let heavy = FilterKind::Product { factor: Distribution::pareto(1.2) };
        assert!(FilterModel::new(heavy.clone(), 1.0, Some(0.5)).is_err());
        assert!(FilterModel::new(heavy, 1.0, Some(0.1)).is_ok());
        assert!(FilterModel::new(FilterKind::KernelIntegral { kernel: Kernel::Exp { lambda: 1.0 } }, 1.0, Some(1.5)).is_err());
    }
}
