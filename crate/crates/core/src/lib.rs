//! Recursive Bayesian estimation on the unit circle.
//!
//! Densities live in [`distributions`], moment-preserving deterministic
//! samplers in [`sampling`], and the filter steps built from them in
//! [`filter`]. [`baseline`] holds the comparison estimators and [`eval`]
//! the experiment harness behind the `circfilt` binary.

pub mod baseline;
pub mod distributions;
pub mod error;
pub mod eval;
pub mod filter;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeExamples;
