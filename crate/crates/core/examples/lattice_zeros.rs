//! Lattice detection for atoms in the equality case and a quadrature zero
//! search for a truncated power law.
//!
//! cargo run --example lattice_zeros

use std::f64::consts::{E, PI};

use regvar::certify::{common_unit, detect_lattice, find_zero, rational_approx, ScanOptions};
use regvar::measures::Distribution;
use regvar::mellin::{EvalMode, Subject};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("355/113 -> {:?}", rational_approx(355.0 / 113.0, 1e-12, 1000));
    println!("sqrt 2  -> {:?}", rational_approx(2f64.sqrt(), 1e-9, 1000));

    let offsets = [3.0 * 0.7, -0.7, 5.0 * 0.7];
    println!("offsets {offsets:?}: {:?}", common_unit(&offsets));

    // anchor 1 balanced by atoms at e^(pi/2) and e^(-3 pi/2)
    let atoms = [(1.0, 1.0), ((PI / 2.0).exp(), 0.5 * (-PI / 2.0).exp()), ((-1.5 * PI).exp(), 0.5 * (1.5 * PI).exp())];
    println!("lattice: {:?}", detect_lattice(&atoms, 0));

    let hi = (2.0 * PI).exp();
    let d = Distribution::TruncatedPower { alpha: 1.0, lo: 1.0, hi };
    let opts = ScanOptions { mode: EvalMode::Quadrature, ..Default::default() };
    let v = find_zero(&Subject::Dist { dist: d }, 1.0, Some(5.0), &opts)?;
    println!("truncated power on [1, e^(2 pi)]: {} at theta0 = {:?}", v.kind_name(), v.theta0());

    let two_point = Distribution::Discrete { atoms: vec![(1.0, E / (1.0 + E)), (E, 1.0 / (1.0 + E))] };
    let v = find_zero(&Subject::Dist { dist: two_point }, 1.0, None, &ScanOptions::default())?;
    println!("two-point on {{1, e}}: theta0 = {:?} (pi = {PI})", v.theta0());
    Ok(())
}
