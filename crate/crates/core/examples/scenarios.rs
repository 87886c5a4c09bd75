//! Runs every shipped scenario at a reduced sample size and prints its checks.
//!
//! cargo run --release --example scenarios -- [n]

use regvar::cli::catalog;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: Option<usize> = std::env::args().nth(1).map(|s| s.parse()).transpose()?;
    for s in catalog().scenarios {
        let r = s.run(n.or(Some(200_000)), None)?;
        println!("{} ({}): {}", s.name, s.description, if r.passed() { "pass" } else { "FAIL" });
        for c in &r.checks {
            println!("  {:32} {:>12.6} target {} tol {}", c.name, c.value, c.target, c.tolerance);
        }
    }
    Ok(())
}
