//! Measures, distributions, filters and the log-periodic counterexample.

pub mod counterexample;
pub mod dist;
pub mod filter;
pub mod kernel;
pub mod sampling;
pub mod spectral;

pub use counterexample::{build_noise_law, counterexample_tail, CounterexampleSpec, NoiseLaw};
pub use dist::Distribution;
pub use filter::{FilterKind, FilterModel, Weights};
pub use kernel::{kernel_to_measure, Kernel};
pub use sampling::sample_noise;
pub use spectral::{AcPiece, AtomFamily, PowerMeasure, SpectralMeasure};
