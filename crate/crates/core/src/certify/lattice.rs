//! Commensurability of log-offsets and the odd lattice of the equality case.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tolerance of rational reconstruction and of lattice membership.
pub const LATTICE_TOL: f64 = 1e-9;
/// Largest denominator accepted in rational reconstruction.
pub const MAX_DENOMINATOR: i64 = 1000;

/// Continued-fraction approximation `p/q` of `r` with `q <= max_den` and
/// `|r - p/q| <= tol * max(1, |r|)`.
pub fn rational_approx(r: f64, tol: f64, max_den: i64) -> Option<(i64, i64)> {
    if !r.is_finite() || r.abs() > 1e12 {
        return None;
    }
    let target = tol * r.abs().max(1.0);
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut x = r;
    for _ in 0..64 {
        let a = x.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (r - h1 as f64 / k1 as f64).abs() <= target {
            return Some((h1, k1));
        }
        let frac = x - a;
        if frac.abs() < 1e-300 {
            return None;
        }
        x = 1.0 / frac;
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A common unit `u > 0` with `offsets[j] = u * multiples[j]` and
/// `gcd(multiples) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonUnit {
    pub unit: f64,
    pub multiples: Vec<i64>,
}

/// Finds the largest common unit of the offsets, if they are commensurable
/// at [`LATTICE_TOL`]. Zero offsets get multiple zero.
pub fn common_unit(offsets: &[f64]) -> Option<CommonUnit> {
    let scale = offsets.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if scale == 0.0 {
        return None;
    }
    let nonzero = |d: &f64| d.abs() > LATTICE_TOL * scale;
    let reference = offsets.iter().copied().filter(nonzero).min_by(|a, b| a.abs().total_cmp(&b.abs()))?;
    let mut fracs = Vec::with_capacity(offsets.len());
    for d in offsets {
        if !nonzero(d) {
            fracs.push((0, 1));
            continue;
        }
        fracs.push(rational_approx(d / reference, LATTICE_TOL, MAX_DENOMINATOR)?);
    }
    let mut q_all: i64 = 1;
    for &(_, q) in &fracs {
        q_all = q_all / gcd(q_all, q) * q;
        if q_all > MAX_DENOMINATOR * MAX_DENOMINATOR {
            return None;
        }
    }
    let n: Vec<i64> = fracs.iter().map(|&(p, q)| p * (q_all / q)).collect();
    let g = n.iter().fold(0, |g, &v| gcd(g, v));
    let sign = reference.signum() as i64;
    let multiples: Vec<i64> = n.iter().map(|&v| sign * v / g).collect();
    // least-squares unit from all offsets
    let num: f64 = offsets.iter().zip(&multiples).map(|(d, &m)| d * m as f64).sum();
    let den: f64 = multiples.iter().map(|&m| (m * m) as f64).sum();
    let unit = num / den;
    let ok = offsets.iter().zip(&multiples).all(|(d, &m)| (d - unit * m as f64).abs() <= LATTICE_TOL * d.abs().max(1.0));
    ok.then_some(CommonUnit { unit, multiples })
}

/// The set `{x0} u {x0 e^(pi (2k+1) / theta0)}` carrying every atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeWitness {
    pub x0: f64,
    pub theta0: f64,
    /// Indices of the non-anchor atoms.
    pub members: Vec<usize>,
    /// `k_j` with `log(x_j / x0) = pi (2 k_j + 1) / theta0`.
    pub k: Vec<i64>,
}

/// Looks for `theta0 > 0` placing every non-anchor atom at an odd multiple
/// of `pi / theta0` in log-distance from the anchor. Returns the smallest
/// such `theta0`.
pub fn detect_lattice(atoms: &[(f64, f64)], anchor: usize) -> Option<LatticeWitness> {
    let x0 = atoms.get(anchor)?.0;
    let members: Vec<usize> = (0..atoms.len()).filter(|&j| j != anchor).collect();
    if members.is_empty() {
        return None;
    }
    let offsets: Vec<f64> = members.iter().map(|&j| (atoms[j].0 / x0).ln()).collect();
    if offsets.iter().any(|d| *d == 0.0) {
        return None;
    }
    let cu = common_unit(&offsets)?;
    if cu.multiples.iter().any(|m| m % 2 == 0) {
        return None;
    }
    let theta0 = PI / cu.unit;
    let ok = offsets
        .iter()
        .zip(&cu.multiples)
        .all(|(d, &m)| (d * theta0 / PI - m as f64).abs() <= LATTICE_TOL * (m as f64).abs().max(1.0));
    if !ok {
        return None;
    }
    let k = cu.multiples.iter().map(|&m| (m - 1).div_euclid(2)).collect();
    Some(LatticeWitness { x0, theta0, members, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn rationals() {
        assert_eq!(rational_approx(3.0, 1e-9, 1000), Some((3, 1)));
        assert_eq!(rational_approx(-2.5, 1e-9, 1000), Some((-5, 2)));
        assert_eq!(rational_approx(355.0 / 113.0, 1e-12, 1000), Some((355, 113)));
        assert_eq!(rational_approx(2f64.sqrt(), 1e-9, 1000), None);
    }

    fn offsets_to_atoms(offsets: &[f64]) -> Vec<(f64, f64)> {
        let mut atoms = vec![(1.0, 1.0)];
        atoms.extend(offsets.iter().map(|d| (d.exp(), 1.0)));
        atoms
    }

    #[test]
    fn single_offset() {
        let w = detect_lattice(&offsets_to_atoms(&[LN_2]), 0).unwrap();
        assert!((w.theta0 - PI / LN_2).abs() < 1e-12);
        assert_eq!(w.k, vec![0]);
    }

    #[test]
    fn odd_ratio() {
        let w = detect_lattice(&offsets_to_atoms(&[LN_2, 3.0 * LN_2]), 0).unwrap();
        assert!((w.theta0 - PI / LN_2).abs() < 1e-12);
        assert_eq!(w.k, vec![0, 1]);
        let neg = detect_lattice(&offsets_to_atoms(&[-LN_2, 3.0 * LN_2]), 0).unwrap();
        assert_eq!(neg.k, vec![-1, 1]);
    }

    #[test]
    fn parity_and_irrational_fail() {
        assert!(detect_lattice(&offsets_to_atoms(&[LN_2, 2.0 * LN_2]), 0).is_none());
        assert!(detect_lattice(&offsets_to_atoms(&[1.0, 2f64.sqrt()]), 0).is_none());
    }

    #[test]
    fn fractional_ratio() {
        // 3/5: unit d/3... offsets 3u and 5u, both odd
        let u = 0.21;
        let w = detect_lattice(&offsets_to_atoms(&[3.0 * u, 5.0 * u]), 0).unwrap();
        assert!((w.theta0 - PI / u).abs() < 1e-9);
        let cu = common_unit(&[0.4, 0.6, 0.0]).unwrap();
        assert_eq!(cu.multiples, vec![2, 3, 0]);
        assert!((cu.unit - 0.2).abs() < 1e-15);
    }
}
