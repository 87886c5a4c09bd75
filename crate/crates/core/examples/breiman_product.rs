//! `P(Y Z > x) / P(Z > x)` for uniform `Y` and Pareto(1) `Z`: exact
//! quadrature against Monte Carlo.
//!
//! cargo run --release --example breiman_product -- [n]

use regvar::measures::Distribution;
use regvar::simulate::oracle::product_tail;
use regvar::simulate::{verify_product, SimOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1_000_000);
    let (y, z) = (Distribution::uniform01(), Distribution::pareto(1.0));
    let probes = [1.0, 10.0, 100.0, 1e4];
    let r = verify_product(&y, &z, 1.0, &SimOptions::new(n, 1, &probes))?;
    println!("target E[Y] = {}", r.target_ratio);
    println!("{:>8} {:>14} {:>12} {:>10}", "x", "exact ratio", "MC ratio", "SE");
    for x in probes {
        let exact = product_tail(&y, &z, x).map(|t| t / z.tail(x)).unwrap_or(f64::NAN);
        let p = r.probe(x).unwrap();
        println!("{x:8} {exact:14.12} {:12.5} {:10.5}", p.ratio, p.ratio_stderr);
    }
    Ok(())
}
