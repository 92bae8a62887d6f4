//! fraclab: fractional gradient, divergence, Laplacian, Riesz transform
//! and potential, and Fourier multiplier operators on sampled functions
//! over R^n (n = 1, 2), with two independent evaluation backends and an
//! executable verification suite for their limiting and interpolation
//! behavior.
//!
//! The two backends are the point of the crate:
//!
//! * [`spectral`]: padded-DFT multiplier evaluation (the fast path);
//! * [`quadrature`]: direct real-space singular-integral sums (the
//!   independent oracle).
//!
//! [`verify`] turns the operators' limiting identities (`alpha -> 0+`,
//! `alpha -> 1-`, energy rescaling, interpolation inequalities, tail
//! scaling, the Besov strict-inclusion example) into reproducible
//! pass/fail reports.

pub mod backend;
pub mod config;
pub mod constants;
pub mod error;
mod exterior;
mod fft_util;
pub mod fields;
pub mod norms;
pub mod quadrature;
pub mod spectral;
pub mod verify;

pub use error::{FraclabError, Result};
