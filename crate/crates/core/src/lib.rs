//! Significant-digit probabilities under a bounded two-stage uniform model.
//!
//! A first fair die picks a bound `i` in `[1, n + 1 - 10^(p-1)]`, a second one
//! picks an integer uniformly in `[10^(p-1), i + 10^(p-1) - 1]`. The crate
//! computes the probability `P(d, n, p)` that the p-th significant digit of
//! the second draw is `d`, exactly ([`exact_law`]), in the limit
//! ([`asymptotics`]), by brute force and simulation ([`oracle`]), and fits
//! observed digit histograms against it ([`audit`]).

pub mod asymptotics;
pub mod audit;
pub mod cli;
pub mod digit_core;
pub mod error;
pub mod exact_law;
pub mod oracle;
pub mod sum;
pub mod tables;

pub use digit_core::{Digit, Position};
pub use error::{Error, Result};
pub use exact_law::{ModelParams, ProbabilityValue, Provenance};
