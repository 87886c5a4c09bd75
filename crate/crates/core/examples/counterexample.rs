//! Builds log-periodic noise for the weights (0.5, 0.5, 1) and shows that
//! the filtered output is regularly varying while the noise is not.
//!
//! cargo run --release --example counterexample -- [n] [seed]

use std::f64::consts::PI;

use regvar::measures::{build_noise_law, CounterexampleSpec, Weights};
use regvar::simulate::{verify_weighted_sum, SimOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1_000_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    // 0.5^s + 0.5^s + 1 vanishes at s = 1 + i pi / ln 2
    let theta0 = PI / 2f64.ln();
    let spec = CounterexampleSpec::new(1.0, theta0, 0.9, 0.0)?;
    let law = build_noise_law(&spec)?;
    println!("period ratio {:.4}, amplitude {:.5}", spec.period_ratio(), spec.amplitude());
    for x in [3.0, 4.0, 5.0, 6.0, 7.0, 8.0] {
        println!("  x = {x}: x nu(x, inf) = {:.5}, nu(4x)/nu(x) = {:.15}", x * spec.nu_tail(x), spec.nu_tail(4.0 * x) / spec.nu_tail(x));
    }

    let noise = law.to_noise();
    let r = verify_weighted_sum(&Weights::finite(&[0.5, 0.5, 1.0]), &noise, 1.0, &SimOptions::new(n, seed, &[50.0]))?;
    println!("fitted output index {:.4}", r.fitted_index.unwrap_or(f64::NAN));
    println!("noise oscillation of x P(Z > x): {:.5}", r.oscillation.unwrap_or(f64::NAN));
    Ok(())
}
