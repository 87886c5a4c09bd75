//! Tail of `Z_1 + 0.5 Z_2` with symmetric Pareto(1) noise; the ratio to
//! `P(Z > x)` tends to `1 + 0.5 = 1.5`.
//!
//! cargo run --release --example weighted_sum -- [n] [out.csv]

use regvar::measures::{Distribution, Weights};
use regvar::simulate::{verify_weighted_sum, SimOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1_000_000);
    let noise: Distribution = "sym:pareto:1".parse()?;
    let r = verify_weighted_sum(&Weights::finite(&[1.0, 0.5]), &noise, 1.0, &SimOptions::new(n, 1, &[10.0, 50.0, 200.0]))?;
    for p in &r.probes {
        println!("x = {:6}: ratio {:.4} +- {:.4} (target {})", p.x, p.ratio, p.ratio_stderr, r.target_ratio);
    }
    println!("fitted index {:.4}", r.fitted_index.unwrap_or(f64::NAN));
    if let Some(path) = args.next() {
        std::fs::write(path, r.to_csv())?;
    }
    Ok(())
}
