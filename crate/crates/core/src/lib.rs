//! Gaussian double-double-slit model.
//!
//! Two particles share a two-mode Gaussian state and each passes through its
//! own double slit. This crate evaluates that model in closed form and carries
//! the numerical machinery used to cross-check it:
//!
//! - [`states`]: parameter families and position/momentum wavefunctions.
//! - [`wigner`]: full and one-particle ("partial") Wigner functions.
//! - [`densities`]: far-field (momentum) probability densities.
//! - [`interferometry`]: fringe envelopes, visibility, predictability and the
//!   complementarity inequality.
//! - [`purification`]: mapping an asymmetric state onto the symmetric
//!   `theta` family with identical one-particle statistics.
//! - [`multipath`]: distinguishability, predictability, coherence and fringe
//!   visibility for `n` paths.
//! - [`numerics`]: trapezoid quadrature, extremum search, seeded rejection
//!   sampling and least-squares fringe fitting.
//!
//! Units are natural (`hbar = 1`): widths `a`, `b` are inverse squared
//! lengths, slit half-separations are lengths and momenta are inverse lengths.
//!
//! The crate is `no_std` and needs only `alloc`. Every operation is a pure
//! function of immutable parameters, so all of it is safe to call from any
//! number of threads.
//!
//! ```
//! use epr_dds_core::{interferometry, states::ThetaParams};
//!
//! let params = ThetaParams::new(1.0, 1.0, 0.0).unwrap();
//! let report = interferometry::visibility_theta(&params);
//! assert!((report.visibility - (-2.0f64).exp()).abs() < 1e-15);
//! ```
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod densities;
pub mod error;
pub mod interferometry;
mod math;
pub mod multipath;
pub mod numerics;
pub mod purification;
pub mod states;
pub mod wigner;

pub use error::{Error, Result};
pub use states::{AsymParams, ThetaParams};
