//! Classifies a handful of weighted sums, products and kernel integrals.
//!
//! cargo run --example classify_filters

use regvar::certify::{classify, ScanOptions};
use regvar::measures::{Distribution, FilterKind, FilterModel, Kernel, Weights};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases: Vec<(&str, FilterKind, f64)> = vec![
        ("weights 1, 0.4, 0.3", FilterKind::WeightedSum { weights: Weights::finite(&[1.0, 0.4, 0.3]) }, 1.0),
        ("weights 0.5, 0.5, 1", FilterKind::WeightedSum { weights: Weights::finite(&[0.5, 0.5, 1.0]) }, 1.0),
        ("geometric 0.5^j", FilterKind::WeightedSum { weights: Weights::geometric(1.0, 0.5) }, 1.0),
        ("Y ~ gamma(2, 1)", FilterKind::Product { factor: "gamma:2,1".parse()? }, 1.5),
        ("Y ~ uniform(0, 1)", FilterKind::Product { factor: Distribution::uniform01() }, 1.0),
        ("kernel e^-t", FilterKind::KernelIntegral { kernel: Kernel::Exp { lambda: 1.0 } }, 1.0),
        ("kernel step 1,1,2,0.5", FilterKind::KernelIntegral { kernel: "step:1,1,2,0.5".parse()? }, 1.0),
    ];
    let opts = ScanOptions::default();
    for (label, kind, alpha) in cases {
        let v = classify(&FilterModel::new(kind, alpha, None)?, None, &opts)?;
        match v.theta0() {
            Some(t) => println!("{label:24} alpha={alpha}: {} ({:?}), zero at theta0={t:.12}", v.kind_name(), v.certificate()),
            None => println!("{label:24} alpha={alpha}: {} ({:?})", v.kind_name(), v.certificate()),
        }
    }
    Ok(())
}
