//! Deciding whether a filter determines regular variation: certificates,
//! lattice detection and certified zero search on the line `Re s = alpha`.

pub mod lattice;
pub mod scan;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::measures::spectral::merge_atoms;
use crate::measures::{AcPiece, AtomFamily, Distribution, FilterKind, FilterModel, Kernel, PowerMeasure, SpectralMeasure};
use crate::mellin::{eval_atoms, Subject};

pub use lattice::{common_unit, detect_lattice, rational_approx, CommonUnit, LatticeWitness};
pub use scan::{LineFn, ScanOptions, ScanOutcome, ZERO_RTOL};

/// Window scanned for subjects with an absolutely continuous part when no
/// window is given.
pub const DEFAULT_AC_WINDOW: f64 = 100.0;

/// Why a verdict holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// One atom's alpha-contribution exceeds all the rest.
    DominantAtom,
    /// Equality case, and the other atoms do not sit on an odd lattice.
    LatticeAbsent,
    /// `|M|` is periodic and a full period was scanned.
    PeriodicFullScan,
    /// The transform has a closed form that never vanishes.
    ClosedForm,
    /// A dominant atomic part beats the decaying continuous part beyond a
    /// crossover, and the window below it was scanned.
    DecayCrossover,
    /// Only a finite window was scanned.
    WindowOnly,
    /// Zero located through the odd lattice of the equality case.
    LatticeZero,
    /// Zero located by the scan.
    ScanZero,
}

/// Outcome of a determination check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    Determining {
        certificate: Certificate,
        /// Lower bound on `|M|` where one is known.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_modulus: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta_max: Option<f64>,
    },
    NotDetermining {
        certificate: Certificate,
        theta0: f64,
        /// `|M(theta0)|`.
        #[serde(rename = "min_modulus")]
        residual: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lattice: Option<LatticeWitness>,
    },
    WindowCertified {
        certificate: Certificate,
        theta_max: f64,
        min_modulus: f64,
    },
}

impl Verdict {
    fn determining(certificate: Certificate, min_modulus: Option<f64>, theta_max: Option<f64>) -> Self {
        Verdict::Determining { certificate, min_modulus, theta_max }
    }

    pub fn certificate(&self) -> Certificate {
        match self {
            Verdict::Determining { certificate, .. }
            | Verdict::NotDetermining { certificate, .. }
            | Verdict::WindowCertified { certificate, .. } => *certificate,
        }
    }

    pub fn is_determining(&self) -> bool {
        matches!(self, Verdict::Determining { .. })
    }

    pub fn is_not_determining(&self) -> bool {
        matches!(self, Verdict::NotDetermining { .. })
    }

    pub fn theta0(&self) -> Option<f64> {
        match self {
            Verdict::NotDetermining { theta0, .. } => Some(*theta0),
            _ => None,
        }
    }

    /// Process exit code: 0 determining, 2 not determining, 3 window only.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Determining { .. } => 0,
            Verdict::NotDetermining { .. } => 2,
            Verdict::WindowCertified { .. } => 3,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Verdict::Determining { .. } => "Determining",
            Verdict::NotDetermining { .. } => "NotDetermining",
            Verdict::WindowCertified { .. } => "WindowCertified",
        }
    }
}

/// Index of the atom with the largest `w x^alpha`; ties go to the largest
/// location.
fn dominant_index(atoms: &[(f64, f64)], alpha: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &(x, w)) in atoms.iter().enumerate() {
        let c = w * x.powf(alpha);
        best = match best {
            None => Some((i, c)),
            Some((j, cb)) => {
                let tie = (c - cb).abs() <= 1e-12 * c.max(cb);
                if (!tie && c > cb) || (tie && x > atoms[j].0) {
                    Some((i, c))
                } else {
                    Some((j, cb))
                }
            }
        };
    }
    best.map(|b| b.0)
}

/// Dominant-atom and equality-case certificates for finite atomic measures.
pub fn fast_path_atoms(measure: &SpectralMeasure, alpha: f64) -> Option<Verdict> {
    if !measure.is_finite_atomic() {
        return None;
    }
    let atoms = merge_atoms(&measure.atoms);
    let anchor = dominant_index(&atoms, alpha)?;
    let c: Vec<f64> = atoms.iter().map(|&(x, w)| w * x.powf(alpha)).collect();
    let c0 = c[anchor];
    let rest: f64 = c.iter().enumerate().filter(|&(i, _)| i != anchor).map(|(_, v)| v).sum();
    let gap = c0 - rest;
    let tol = 1e-12 * (c0 + rest);
    if gap > tol {
        return Some(Verdict::determining(Certificate::DominantAtom, Some(gap), None));
    }
    if gap < -tol {
        return None;
    }
    // near-ties for the largest atom leave the anchor ambiguous
    let total = c0 + rest;
    let candidates = std::iter::once(anchor).chain((0..c.len()).filter(|&i| i != anchor && (2.0 * c[i] - total).abs() <= tol));
    let witness = candidates.into_iter().find_map(|i| detect_lattice(&atoms, i));
    Some(match witness {
        Some(w) => {
            let residual = eval_atoms(&atoms, alpha, w.theta0).norm();
            Verdict::NotDetermining { certificate: Certificate::LatticeZero, theta0: w.theta0, residual, lattice: Some(w) }
        }
        None => Verdict::determining(Certificate::LatticeAbsent, None, None),
    })
}

/// Whether the transform has a closed form with no zero on the line.
fn closed_form_nonvanishing(subject: &Subject, alpha: f64) -> bool {
    match subject {
        Subject::Dist { dist } => match dist.magnitude() {
            Distribution::Pareto { .. }
            | Distribution::Uniform { .. }
            | Distribution::Gamma { .. }
            | Distribution::LogNormal { .. }
            | Distribution::AbsCauchy => true,
            // c (hi^k - lo^k) / k with Re k = alpha - p vanishes only if Re k = 0
            Distribution::TruncatedPower { alpha: p, .. } => (alpha - p).abs() > 1e-12,
            _ => false,
        },
        Subject::Kernel { kernel } => !matches!(kernel, Kernel::Step { .. }),
        // c / s and c / sqrt(s) have positive real part on the line
        Subject::Measure { measure } => {
            measure.atoms.is_empty()
                && measure.families.is_empty()
                && !measure.ac_pieces.is_empty()
                && measure
                    .ac_pieces
                    .iter()
                    .all(|p| matches!(p, AcPiece::ExpKernelImage { .. } | AcPiece::GaussianKernelImage { .. }))
        }
    }
}

/// Nonincreasing bound on `|M_piece(alpha + i theta)|` for `theta >= 0`.
fn piece_envelope(piece: &AcPiece, alpha: f64, theta: f64) -> Option<f64> {
    let s = Complex64::new(alpha, theta).norm();
    match piece {
        AcPiece::ExpKernelImage { coef } => Some(coef / s),
        AcPiece::GaussianKernelImage { lambda } => Some((PI / (lambda * s)).sqrt()),
        AcPiece::TruncatedPower { c, p, lo, hi } => {
            let k = alpha - p;
            let kn = Complex64::new(k, theta).norm();
            match hi {
                Some(h) if k.abs() > 1e-12 => Some(c * (h.powf(k) + lo.powf(k)) / kn),
                None if k < 0.0 => Some(c * lo.powf(k) / kn),
                _ => None,
            }
        }
        AcPiece::Tabulated { .. } => None,
    }
}

/// The largest single atom and the alpha-mass of everything else.
fn atomic_dominance(measure: &SpectralMeasure, alpha: f64, total: f64) -> Option<f64> {
    let mut c0: f64 = measure.atoms.iter().map(|&(x, w)| w * x.powf(alpha)).fold(0.0, f64::max);
    for f in &measure.families {
        c0 = c0.max(f.location(0).powf(alpha));
    }
    let gap = c0 - (total - c0);
    (gap > 1e-12 * total).then_some(gap)
}

/// Common period of `|M|` when all atomic log-locations are commensurable
/// and there is no continuous part.
fn periodic_unit(measure: &SpectralMeasure) -> Option<f64> {
    if !measure.ac_pieces.is_empty() {
        return None;
    }
    let mut logs: Vec<f64> = measure.atoms.iter().map(|a| a.0.ln()).collect();
    let mut steps = Vec::new();
    for f in &measure.families {
        match f {
            AtomFamily::Geometric { first, ratio } => {
                logs.push(first.ln());
                steps.push(ratio.ln());
            }
            AtomFamily::PowerLaw { .. } => return None,
        }
    }
    let base = *logs.first()?;
    let mut offsets: Vec<f64> = logs[1..].iter().map(|l| l - base).filter(|d| *d != 0.0).collect();
    offsets.extend(steps);
    if offsets.is_empty() {
        return None;
    }
    common_unit(&offsets).map(|cu| cu.unit.abs())
}

/// Smallest log-distance between distinct atoms.
pub fn min_offset(atoms: &[(f64, f64)]) -> Option<f64> {
    let mut logs: Vec<f64> = atoms.iter().map(|a| a.0.ln()).collect();
    logs.sort_by(f64::total_cmp);
    logs.windows(2).map(|w| w[1] - w[0]).filter(|d| *d > 0.0).min_by(f64::total_cmp)
}

fn from_scan(out: &ScanOutcome, complete_certificate: Option<Certificate>, lower: Option<f64>) -> Verdict {
    if let Some((theta0, residual)) = out.zero {
        return Verdict::NotDetermining { certificate: Certificate::ScanZero, theta0, residual, lattice: None };
    }
    match complete_certificate {
        Some(c) if out.complete => {
            let floor = lower.map_or(out.min_modulus, |l| l.min(out.min_modulus));
            Verdict::determining(c, Some(floor), Some(out.reached))
        }
        _ => Verdict::WindowCertified { certificate: Certificate::WindowOnly, theta_max: out.reached, min_modulus: out.min_modulus },
    }
}

/// Decides whether `M(theta) = int y^(alpha + i theta) rho(dy)` vanishes
/// for some real `theta`.
///
/// Certificates come first (dominant atom, odd lattice, closed forms); what
/// remains is scanned over one period when `|M|` is periodic, up to a decay
/// crossover when a continuous part fades below a dominant atomic part, and
/// over `[0, theta_max]` otherwise. The default window for atoms is
/// `200 pi / min_offset`.
pub fn find_zero(subject: &Subject, alpha: f64, theta_max: Option<f64>, opts: &ScanOptions) -> Result<Verdict> {
    subject.validate()?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Inapplicable(format!("filter checks need alpha >= 0, got {alpha}")));
    }
    if let Some(t) = theta_max {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("theta_max must be positive, got {t}")));
        }
    }
    let total = subject.moment(alpha);
    if !total.is_finite() {
        return Err(Error::MomentDivergence { what: "line transform".into(), order: alpha });
    }
    let atomic = subject.atomic_measure();
    if opts.certificates {
        if let Some(v) = atomic.as_ref().and_then(|m| fast_path_atoms(m, alpha)) {
            return Ok(v);
        }
        if closed_form_nonvanishing(subject, alpha) {
            return Ok(Verdict::determining(Certificate::ClosedForm, None, None));
        }
        if let Subject::Measure { measure } = subject {
            if let Some(gap) = atomic_dominance(measure, alpha, total) {
                return Ok(Verdict::determining(Certificate::DominantAtom, Some(gap), None));
            }
        }
    }
    let f = LineFn::new(subject, alpha, opts.mode);
    let measure = match subject {
        Subject::Measure { measure } => Some(measure.clone()),
        _ => atomic.clone(),
    };
    if let Some(unit) = measure.as_ref().and_then(periodic_unit) {
        let period = 2.0 * PI / unit;
        let out = f.scan_parallel(0.0, period, opts);
        return Ok(from_scan(&out, Some(Certificate::PeriodicFullScan), None));
    }
    if let Some(m) = measure.as_ref().filter(|m| !m.ac_pieces.is_empty()) {
        if let Some(v) = decay_crossover(&f, m, alpha, opts) {
            return Ok(v);
        }
    }
    let window = theta_max.unwrap_or_else(|| match atomic.as_ref().and_then(|m| min_offset(&m.atoms)) {
        Some(d) => 200.0 * PI / d,
        None => DEFAULT_AC_WINDOW,
    });
    let out = f.scan_parallel(0.0, window, opts);
    Ok(from_scan(&out, None, None))
}

fn decay_crossover(f: &LineFn, m: &SpectralMeasure, alpha: f64, opts: &ScanOptions) -> Option<Verdict> {
    let atomic = SpectralMeasure { ac_pieces: vec![], ..m.clone() };
    if atomic.atoms.is_empty() && atomic.families.is_empty() {
        return None;
    }
    let atomic_total = crate::mellin::moment(&atomic, alpha);
    let margin = atomic_dominance(&atomic, alpha, atomic_total)?;
    let envelope = |theta: f64| -> Option<f64> { m.ac_pieces.iter().map(|p| piece_envelope(p, alpha, theta)).sum() };
    envelope(0.0)?;
    let mut cross = 1.0;
    while envelope(cross)? > 0.9 * margin {
        cross *= 2.0;
        if cross > 1e9 {
            return None;
        }
    }
    let out = f.scan_parallel(0.0, cross, opts);
    Some(from_scan(&out, Some(Certificate::DecayCrossover), Some(margin - envelope(cross)?)))
}

/// The spectral measure `rho` of a filter, as a transform subject.
pub fn filter_subject(model: &FilterModel) -> Result<Subject> {
    Ok(match &model.kind {
        FilterKind::WeightedSum { weights } => Subject::Measure { measure: weights.to_measure()? },
        FilterKind::Product { factor } => Subject::Dist { dist: factor.clone() },
        FilterKind::KernelIntegral { kernel } => Subject::Kernel { kernel: kernel.clone() },
    })
}

/// Decides a filter model at its own `alpha`.
pub fn classify(model: &FilterModel, theta_max: Option<f64>, opts: &ScanOptions) -> Result<Verdict> {
    model.validate()?;
    find_zero(&filter_subject(model)?, model.alpha, theta_max, opts)
}

/// The measure `nu` whose left tail is in question.
#[derive(Debug, Clone, Copy)]
pub enum LeftTailSubject<'a> {
    Dist(&'a Distribution),
    Power(PowerMeasure),
    Measure(&'a SpectralMeasure),
}

/// Sufficient conditions for the left tail of `nu` to be negligible after
/// multiplicative convolution with `rho`: `rho` has bounded support, `nu`
/// is finite near the origin, or `int_0^1 y^(alpha+delta) nu(dy) < inf`.
/// `false` means "not established".
pub fn check_left_tail_negligible(nu: LeftTailSubject, rho: &SpectralMeasure, alpha: f64, delta: f64) -> bool {
    if rho.upper_support().is_finite() {
        return true;
    }
    let p = alpha + delta;
    match nu {
        LeftTailSubject::Dist(_) => true,
        LeftTailSubject::Power(nu) => nu.moment_below_one(p).is_finite(),
        LeftTailSubject::Measure(m) => {
            let finite_near_zero = m.families.is_empty() && m.ac_pieces.iter().all(|piece| piece.support().0 > 0.0);
            finite_near_zero || m.moment_below_one(p).is_finite()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Weights;
    use std::f64::consts::{E, LN_2};

    fn weights(w: &[f64]) -> Subject {
        Subject::Measure { measure: SpectralMeasure::from_weights(w).unwrap() }
    }

    #[test]
    fn fast_path_examples() {
        let m = SpectralMeasure::from_weights(&[1.0, 0.4, 0.3]).unwrap();
        let v = fast_path_atoms(&m, 1.0).unwrap();
        assert_eq!(v.certificate(), Certificate::DominantAtom);
        let m = SpectralMeasure::from_atoms(&[(0.5, 2.0), (1.0, 1.0)]).unwrap();
        let v = fast_path_atoms(&m, 1.0).unwrap();
        assert!((v.theta0().unwrap() - PI / LN_2).abs() < 1e-12);
        let m = SpectralMeasure::from_atoms(&[(1.0, 1.0), (E, 1.0 / E)]).unwrap();
        assert!((fast_path_atoms(&m, 1.0).unwrap().theta0().unwrap() - PI).abs() < 1e-12);
        // no dominant atom
        let m = SpectralMeasure::from_weights(&[1.0, 0.8, 0.7]).unwrap();
        assert!(fast_path_atoms(&m, 1.0).is_none());
        // equality without lattice: offsets ln 2 and 2 ln 2
        let m = SpectralMeasure::from_atoms(&[(1.0, 1.0), (0.5, 1.0), (0.25, 2.0)]).unwrap();
        assert_eq!(fast_path_atoms(&m, 1.0).unwrap().certificate(), Certificate::LatticeAbsent);
    }

    #[test]
    fn find_zero_examples() {
        let opts = ScanOptions::default();
        let v = find_zero(&weights(&[0.5, 0.5, 1.0]), 1.0, None, &opts).unwrap();
        assert!((v.theta0().unwrap() - PI / LN_2).abs() < 1e-9);
        let geo = Subject::Measure { measure: Weights::geometric(0.5, 0.5).to_measure().unwrap() };
        let v = find_zero(&geo, 1.0, None, &opts).unwrap();
        assert_eq!(v.certificate(), Certificate::PeriodicFullScan);
        if let Verdict::Determining { min_modulus: Some(m), .. } = v {
            // |0.5^s / (1 - 0.5^s)| >= 0.5 / 1.5
            assert!(m >= 1.0 / 3.0 - 1e-9);
        }
        let ou = Subject::Kernel { kernel: Kernel::Exp { lambda: 1.0 } };
        assert_eq!(find_zero(&ou, 1.5, None, &opts).unwrap().certificate(), Certificate::ClosedForm);
        assert!(find_zero(&ou, 1.5, Some(-1.0), &opts).is_err());
        assert!(find_zero(&Subject::Dist { dist: Distribution::pareto(1.0) }, 1.0, None, &opts).is_err());
    }

    #[test]
    fn scan_agrees_with_lattice_zero() {
        let opts = ScanOptions { certificates: false, ..Default::default() };
        let v = find_zero(&weights(&[0.5, 0.5, 1.0]), 1.0, None, &opts).unwrap();
        assert_eq!(v.certificate(), Certificate::ScanZero);
        assert!((v.theta0().unwrap() - PI / LN_2).abs() < 1e-9);
        let v = find_zero(&weights(&[1.0, 0.4, 0.3]), 1.0, None, &opts).unwrap();
        assert!(matches!(v, Verdict::WindowCertified { .. } | Verdict::Determining { .. }));
    }

    #[test]
    fn tied_anchor_still_finds_lattice() {
        // the third atom is below rounding, so the two heavy atoms tie
        let big = (3.0 * PI).exp();
        let m = SpectralMeasure::from_atoms(&[(1.0, 1.0), (big, 1.0 / big), ((-PI).exp(), 1e-20)]).unwrap();
        let v = fast_path_atoms(&m, 1.0).unwrap();
        assert_eq!(v.certificate(), Certificate::LatticeZero);
        assert!((v.theta0().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn truncated_power_zero() {
        let d = Distribution::TruncatedPower { alpha: 1.0, lo: 1.0, hi: (2.0 * PI).exp() };
        let v = find_zero(&Subject::Dist { dist: d.clone() }, 1.0, Some(3.0), &ScanOptions::default()).unwrap();
        assert!((v.theta0().unwrap() - 1.0).abs() < 1e-9);
        let v = find_zero(&Subject::Dist { dist: d }, 0.5, None, &ScanOptions::default()).unwrap();
        assert_eq!(v.certificate(), Certificate::ClosedForm);
    }

    #[test]
    fn crossover_for_atom_plus_density() {
        let m = SpectralMeasure {
            atoms: vec![(1.0, 1.0)],
            ac_pieces: vec![AcPiece::ExpKernelImage { coef: 3.0 }],
            ..Default::default()
        };
        let v = find_zero(&Subject::Measure { measure: m }, 1.0, None, &ScanOptions::default()).unwrap();
        // |1 + 3/s| >= 1 - 3/|s| only helps once |s| > 3; the scan covers the rest
        assert_eq!(v.certificate(), Certificate::DecayCrossover);
    }

    #[test]
    fn left_tail_cases() {
        let rho = SpectralMeasure::from_weights(&[0.5, 1.0]).unwrap();
        let unbounded = SpectralMeasure::from_piece(AcPiece::TruncatedPower { c: 1.0, p: 2.0, lo: 1.0, hi: None }).unwrap();
        let nu = PowerMeasure { alpha: 1.0 };
        assert!(check_left_tail_negligible(LeftTailSubject::Power(nu), &rho, 1.0, 0.5));
        assert!(check_left_tail_negligible(LeftTailSubject::Dist(&Distribution::pareto(1.0)), &unbounded, 1.0, 0.5));
        // nu_1 itself: int_0^1 y^1.5 y^-2 dy converges
        assert!(check_left_tail_negligible(LeftTailSubject::Power(nu), &unbounded, 1.0, 0.5));
        assert!(!check_left_tail_negligible(LeftTailSubject::Power(PowerMeasure { alpha: 2.0 }), &unbounded, 1.0, 0.5));
    }

    #[test]
    fn verdict_json_fields() {
        let v = find_zero(&weights(&[0.5, 0.5, 1.0]), 1.0, None, &ScanOptions::default()).unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["kind"], "NotDetermining");
        assert_eq!(j["certificate"], "LatticeZero");
        assert!(j["theta0"].is_f64() && j["min_modulus"].is_f64());
        let back: Verdict = serde_json::from_value(j).unwrap();
        assert_eq!(back, v);
    }
}
