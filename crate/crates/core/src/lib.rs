//! Numerical toolkit for microwave quantum illumination with a two-mode
//! squeezed vacuum (TMSV) source.
//!
//! The crate is split along the physics:
//!
//! - [`gaussian`]: covariance-matrix description of two-mode Gaussian states,
//!   quadrature variances and Wigner densities.
//! - [`fock`]: truncated Fock-space states and operators (TMSV expansion,
//!   thermal states, beam splitter, displacement, partial trace).
//! - [`illumination`]: classical and quantum error-rate envelopes and a
//!   brute-force quantum Chernoff bound over Fock hypothesis states.
//! - [`spectrum`]: squeezing-parameter frequency profiles and the
//!   squeezing/gain mappings.
//!
//! Quadratures follow `q = a + a†`, `p = i(a† − a)`, so the vacuum variance is 1.

pub mod error;
pub mod fock;
pub mod gaussian;
pub mod illumination;
pub mod linalg;
pub mod spectrum;

pub use error::{Error, Result};
pub use gaussian::{SqueezeParam, TwoModeGaussianState};

/// Tolerance on truncation defects (leaked probability, tail mass) above which
/// Fock-space operations refuse to proceed.
pub const TRUNCATION_TOL: f64 = 1e-6;
