//! Inverse problems for regularly varying tails of linear filters.
//!
//! A weighted sum `sum psi_j Z_j`, a product `Y Z` or a stochastic integral
//! `int f dM` with regularly varying output forces regularly varying input
//! exactly when the Mellin transform of the filter's spectral measure has no
//! zero on the line `Re s = alpha`. This crate evaluates those transforms,
//! certifies or refutes the zero-freeness, builds the log-periodic noise laws
//! that defeat the inverse implication, and checks the forward limits by
//! exact quadrature and seeded Monte Carlo.

pub mod certify;
pub mod cli;
pub mod curves;
pub mod error;
pub mod measures;
pub mod mellin;
pub mod simulate;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
