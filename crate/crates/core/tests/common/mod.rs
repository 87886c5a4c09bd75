//! Property checks shared by the proptest suite and the acceptance runner.

#![allow(dead_code)]

use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use regvar::certify::{fast_path_atoms, find_zero, Certificate, ScanOptions, Verdict};
use regvar::measures::{CounterexampleSpec, Distribution, Kernel, SpectralMeasure};
use regvar::mellin::{atoms_derivative_bound, eval_atoms, eval_atoms_derivative, EvalMode, Subject};

/// Random finite atom sets: locations in `[0.05, 20]`, weights in `[0.05, 3]`.
pub fn atoms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.05f64..20.0, 0.05f64..3.0), 1..6)
}

/// A continuous law from the closed catalog.
pub fn continuous_law() -> impl Strategy<Value = Distribution> {
    prop_oneof![
        (0.5f64..4.0, 0.3f64..3.0).prop_map(|(shape, rate)| Distribution::Gamma { shape, rate }),
        (-1.0f64..1.0, 0.2f64..1.5).prop_map(|(mu, sigma)| Distribution::LogNormal { mu, sigma }),
        (0.0f64..1.0, 1.1f64..5.0).prop_map(|(lo, w)| Distribution::Uniform { lo, hi: lo + w }),
        (0.5f64..3.0, 0.5f64..2.0, 1.5f64..20.0).prop_map(|(alpha, lo, r)| Distribution::TruncatedPower {
            alpha,
            lo,
            hi: lo * r
        }),
    ]
}

/// Atom sets of three kinds that exercise every fast-path outcome: a
/// dominant atom, an exact odd lattice in the equality case, and an equality
/// case whose offsets are commensurable with an even multiple.
#[derive(Debug, Clone)]
pub enum FastCase {
    Dominant(Vec<(f64, f64)>, f64),
    OddLattice(Vec<(f64, f64)>, f64, f64),
    EvenLattice(Vec<(f64, f64)>, f64),
}

pub fn fast_case() -> impl Strategy<Value = FastCase> {
    let dominant = (atoms(), 0.3f64..3.0, 1.05f64..3.0).prop_map(|(mut a, alpha, boost)| {
        // scale the first atom so it carries `boost` times the rest
        let rest: f64 = a[1..].iter().map(|&(x, w)| w * x.powf(alpha)).sum();
        let (x0, _) = a[0];
        a[0].1 = (boost * rest).max(1e-3) / x0.powf(alpha);
        a.retain(|p| p.1 > 0.0);
        FastCase::Dominant(a, alpha)
    });
    let odd = (0.5f64..8.0, prop::collection::vec((-3i64..3, 0.1f64..2.0), 1..4), 0.3f64..3.0, 0.1f64..5.0).prop_map(
        |(theta0, ks, alpha, x0)| {
            let mut a: Vec<(f64, f64)> = Vec::new();
            let mut rest = 0.0;
            // draw contributions w x^alpha, not weights, so no atom drowns in rounding
            for (k, c) in ks {
                let x = x0 * (PI * (2 * k + 1) as f64 / theta0).exp();
                if a.iter().any(|p| (p.0 / x - 1.0).abs() < 1e-9) {
                    continue;
                }
                rest += c;
                a.push((x, c / x.powf(alpha)));
            }
            a.insert(0, (x0, rest / x0.powf(alpha)));
            FastCase::OddLattice(a, alpha, theta0)
        },
    );
    let even = (0.2f64..2.0, 0.3f64..3.0, 0.2f64..0.8).prop_map(|(d, alpha, share)| {
        // anchor 1 balanced by atoms at offsets d and 2d
        let (x1, x2) = (d.exp(), (2.0 * d).exp());
        let a = vec![(1.0, 1.0), (x1, share / x1.powf(alpha)), (x2, (1.0 - share) / x2.powf(alpha))];
        FastCase::EvenLattice(a, alpha)
    });
    prop_oneof![4 => dominant, 3 => odd, 1 => even]
}

fn fail(msg: String) -> Result<(), TestCaseError> {
    Err(TestCaseError::fail(msg))
}

/// `|M(theta)| <= M(0)` for positive measures.
pub fn triangle_atoms(a: &[(f64, f64)], alpha: f64, theta: f64) -> Result<(), TestCaseError> {
    let m0: f64 = a.iter().map(|&(x, w)| w * x.powf(alpha)).sum();
    let v = eval_atoms(a, alpha, theta).norm();
    prop_assert!(v <= m0 * (1.0 + 1e-12), "|M({theta})| = {v} > M(0) = {m0}");
    Ok(())
}

pub fn triangle_law(d: &Distribution, theta: f64) -> Result<(), TestCaseError> {
    let alpha = 0.4;
    let s = Subject::Dist { dist: d.clone() };
    let m = s.eval(alpha, theta, EvalMode::Quadrature).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let m0 = d.moment(alpha);
    prop_assert!(m.value.norm() <= m0 * (1.0 + 1e-9) + m.abs_error, "{d}: |M| = {} > {m0}", m.value.norm());
    Ok(())
}

/// `M(-theta) = conj M(theta)`, in both evaluation modes.
pub fn conjugate_symmetry(d: &Distribution, theta: f64) -> Result<(), TestCaseError> {
    let alpha = 0.4;
    let s = Subject::Dist { dist: d.clone() };
    for mode in [EvalMode::Auto, EvalMode::Quadrature] {
        let p = s.eval(alpha, theta, mode).unwrap().value;
        let q = s.eval(alpha, -theta, mode).unwrap().value;
        prop_assert!((p - q.conj()).norm() <= 1e-10 * p.norm().max(1e-3), "{d} {mode:?}: {p} vs {q}");
    }
    Ok(())
}

/// Analytic derivative against central differences (1e-4), and both against
/// the Lipschitz bound.
pub fn derivative_bound(a: &[(f64, f64)], alpha: f64, theta: f64) -> Result<(), TestCaseError> {
    let h = 1e-5;
    let fd = (eval_atoms(a, alpha, theta + h) - eval_atoms(a, alpha, theta - h)) / (2.0 * h);
    let exact = eval_atoms_derivative(a, alpha, theta);
    let bound = atoms_derivative_bound(a, alpha);
    prop_assert!((fd - exact).norm() <= 1e-4 * bound.max(1.0), "fd {fd} vs {exact}");
    prop_assert!(fd.norm() <= bound * (1.0 + 1e-4) + 1e-9, "fd {} above bound {bound}", fd.norm());
    prop_assert!(exact.norm() <= bound * (1.0 + 1e-12));
    Ok(())
}

/// Same check for a kernel's closed form and its bound.
pub fn kernel_derivative_bound(lambda: f64, alpha: f64, theta: f64) -> Result<(), TestCaseError> {
    let s = Subject::Kernel { kernel: Kernel::Exp { lambda } };
    let h = 1e-5;
    let f = |t: f64| s.eval(alpha, t, EvalMode::Auto).unwrap().value;
    let fd = (f(theta + h) - f(theta - h)) / (2.0 * h);
    let bound = s.derivative_bound(alpha);
    prop_assert!(fd.norm() <= bound * (1.0 + 1e-4), "{} > {bound}", fd.norm());
    Ok(())
}

fn same_kind(a: &Verdict, b: &Verdict, theta_scale: f64) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.kind_name(), b.kind_name());
    if let (Some(x), Some(y)) = (a.theta0(), b.theta0()) {
        prop_assert!((x * theta_scale - y).abs() <= 1e-7 * y, "theta0 {x} * {theta_scale} vs {y}");
    }
    Ok(())
}

fn fast(a: &[(f64, f64)], alpha: f64) -> Option<Verdict> {
    fast_path_atoms(&SpectralMeasure::from_atoms(a).ok()?, alpha)
}

/// Multiplying all locations by `c` leaves the verdict and `theta0` alone;
/// raising locations to the power `g` and dividing alpha by `g` divides
/// `theta0` by `g`.
pub fn scaling_invariance(case: &FastCase, c: f64, g: f64) -> Result<(), TestCaseError> {
    let (a, alpha) = match case {
        FastCase::Dominant(a, al) | FastCase::OddLattice(a, al, _) | FastCase::EvenLattice(a, al) => (a, *al),
    };
    let Some(base) = fast(a, alpha) else { return Ok(()) };
    let scaled: Vec<(f64, f64)> = a.iter().map(|&(x, w)| (c * x, w)).collect();
    same_kind(&base, &fast(&scaled, alpha).ok_or_else(|| TestCaseError::fail("scaled lost fast path"))?, 1.0)?;
    let powered: Vec<(f64, f64)> = a.iter().map(|&(x, w)| (x.powf(g), w)).collect();
    let v = fast(&powered, alpha / g).ok_or_else(|| TestCaseError::fail("powered lost fast path"))?;
    same_kind(&base, &v, 1.0 / g)
}

/// The fast path and a certificate-free scan reach the same conclusion.
pub fn fast_path_agrees_with_scan(case: &FastCase) -> Result<(), TestCaseError> {
    let scan_only = ScanOptions { certificates: false, ..Default::default() };
    let (a, alpha) = match case {
        FastCase::Dominant(a, al) | FastCase::OddLattice(a, al, _) | FastCase::EvenLattice(a, al) => (a, *al),
    };
    let m = SpectralMeasure::from_atoms(a).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let subject = Subject::Measure { measure: m.clone() };
    let Some(v) = fast_path_atoms(&m, alpha) else {
        return fail(format!("no fast path for {case:?}"));
    };
    match (case, &v) {
        (FastCase::Dominant(..), Verdict::Determining { certificate: Certificate::DominantAtom, .. })
        | (FastCase::EvenLattice(..), Verdict::Determining { certificate: Certificate::LatticeAbsent, .. }) => {
            let s = find_zero(&subject, alpha, Some(50.0), &scan_only).unwrap();
            prop_assert!(!s.is_not_determining(), "scan found a zero: {s:?} for {case:?}");
        }
        (FastCase::OddLattice(_, _, theta0), Verdict::NotDetermining { theta0: t, .. }) => {
            // the lattice may be finer than the one used to build the case
            prop_assert!(*t <= theta0 * (1.0 + 1e-9));
            let s = find_zero(&subject, alpha, Some(1.5 * t), &scan_only).unwrap();
            let found = s.theta0().ok_or_else(|| TestCaseError::fail(format!("scan missed zero {t}: {s:?}")))?;
            prop_assert!((found - t).abs() <= 1e-6 * t, "scan {found} vs lattice {t}");
        }
        _ => return fail(format!("unexpected fast verdict {v:?} for {case:?}")),
    }
    Ok(())
}

/// `nu(r x, inf) = r^-alpha nu(x, inf)` with `r = e^{2 pi / theta0}`.
pub fn log_periodicity(spec: &CounterexampleSpec, x: f64) -> Result<(), TestCaseError> {
    let r = spec.period_ratio();
    let lhs = spec.nu_tail(r * x);
    let rhs = spec.nu_tail(x) * r.powf(-spec.alpha);
    prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs, "{lhs} vs {rhs}");
    Ok(())
}

pub fn counterexample_spec() -> impl Strategy<Value = CounterexampleSpec> {
    (0.3f64..3.0, 0.5f64..10.0, 0.0f64..2.0 * PI, 0.05f64..1.0).prop_map(|(alpha, theta0, phase, rad)| {
        CounterexampleSpec::new(alpha, theta0, rad * phase.cos(), rad * phase.sin()).unwrap()
    })
}
