//! Index-zero checks: a sum of slowly varying noise and a product with a
//! light-tailed factor, Monte Carlo next to the exact convolution.
//!
//! cargo run --release --example slow_variation -- [n]

use regvar::measures::Distribution;
use regvar::simulate::{verify_product, verify_slow_variation_sum, SimOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1_000_000);
    let noise: Distribution = "slowvar".parse()?;
    let opts = SimOptions::new(n, 1, &[1e3, 1e6]);
    let sum = verify_slow_variation_sum(2, &noise, &opts)?;
    let prod = verify_product(&Distribution::pareto(3.0), &noise, 0.0, &opts)?;
    for (label, r) in [("Z1 + Z2", &sum), ("Y Z", &prod)] {
        println!("{label} (target {})", r.target_ratio);
        for p in &r.probes {
            println!("  x = {:8}: MC {:.4} +- {:.4}, exact {:.4}", p.x, p.ratio, p.ratio_stderr, p.exact_ratio.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
