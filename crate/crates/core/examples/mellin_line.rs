//! Tabulates line transforms `theta -> M(alpha + i theta)` for a discrete
//! measure, a law with a closed form and a kernel, next to quadrature.
//!
//! cargo run --example mellin_line -- [alpha]

use regvar::measures::{Distribution, Kernel, SpectralMeasure};
use regvar::mellin::{EvalMode, Subject};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1.0);
    let subjects = [
        ("atoms 0.5,0.5,1", Subject::Measure { measure: SpectralMeasure::from_atoms(&[(0.5, 1.0), (0.5, 1.0), (1.0, 1.0)])? }),
        ("gamma:2,1", Subject::Dist { dist: "gamma:2,1".parse::<Distribution>()? }),
        ("exp kernel", Subject::Kernel { kernel: Kernel::Exp { lambda: 1.0 } }),
    ];
    for (label, s) in &subjects {
        println!("{label} at alpha = {alpha}");
        println!("{:>8} {:>22} {:>22} {:>10}", "theta", "M (auto)", "M (quadrature)", "|diff|");
        for theta in [0.0, 0.5, 1.0, 2.0, 4.532360141827194, 10.0] {
            let a = s.eval(alpha, theta, EvalMode::Auto)?;
            let q = s.eval(alpha, theta, EvalMode::Quadrature)?;
            println!(
                "{theta:8.4} {:>22} {:>22} {:10.2e}",
                format!("{:.6}{:+.6}i", a.value.re, a.value.im),
                format!("{:.6}{:+.6}i", q.value.re, q.value.im),
                (a.value - q.value).norm()
            );
        }
        println!();
    }
    Ok(())
}
