//! Stochastic integral `int e^(-s) dM(s)` against a compound Poisson Levy
//! process with symmetric Pareto(1) jumps.
//!
//! cargo run --release --example ou_integral -- [n]

use regvar::measures::Kernel;
use regvar::simulate::{default_horizon, verify_integral, LevyModel, SimOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1_000_000);
    let kernel = Kernel::Exp { lambda: 1.0 };
    let levy = LevyModel::new("sym:pareto:1".parse()?, 1.0)?;
    println!("default horizon {:.3}", default_horizon(&kernel, 1.0));
    let r = verify_integral(&kernel, &levy, 1.0, None, &SimOptions::new(n, 1, &[10.0, 50.0]))?;
    for p in &r.probes {
        println!(
            "x = {:4}: MC ratio {:.4} +- {:.4}, Levy-measure ratio {:.6} (target {})",
            p.x,
            p.ratio,
            p.ratio_stderr,
            p.levy_ratio.unwrap_or(f64::NAN),
            r.target_ratio
        );
    }
    println!("horizon leaves {:.1e} of int f^alpha outside", r.horizon_fraction.unwrap_or(0.0));
    Ok(())
}
