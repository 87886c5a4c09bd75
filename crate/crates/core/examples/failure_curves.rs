//! Traces the failure curves of three coefficients and writes CSV and SVG.
//!
//! cargo run --release --example failure_curves -- [branches] [out-dir]

use std::time::Instant;

use regvar::curves::{curves_csv, curves_svg, trace_curves, TraceOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let branches: i64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(8);
    let out = args.next().unwrap_or_else(|| ".".into());

    let start = Instant::now();
    let curves = trace_curves(&TraceOptions { branches, ..Default::default() })?;
    println!("{} curves in {:.2?}", curves.len(), start.elapsed());
    for b in &curves {
        let first = b.points.first().unwrap();
        let last = b.points.last().unwrap();
        let (tmin, tmax) = b.points.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.theta), hi.max(p.theta)));
        println!(
            "curve {:3} anchor p/q={}/{} t={} ({:.4}, {:.4}) theta {:.3}..{:.3}, {} points, ends ({:.3},{:.3}) .. ({:.3},{:.3})",
            b.id, b.anchor.p, b.anchor.q, b.anchor.t, b.anchor.psi1, b.anchor.psi2, tmin, tmax, b.points.len(),
            first.psi1, first.psi2, last.psi1, last.psi2
        );
    }
    std::fs::write(format!("{out}/failure_curves.csv"), curves_csv(&curves))?;
    std::fs::write(format!("{out}/failure_curves.svg"), curves_svg(&curves))?;
    Ok(())
}
