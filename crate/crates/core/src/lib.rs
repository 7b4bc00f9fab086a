//! Exact and approximate spin-squeezing dynamics of the one-axis twisting
//! model with collective phase dephasing.
//!
//! Exact expectation values come from closed forms evaluated in log-polar
//! arithmetic, so spins up to `10^6` and beyond cost O(1) per time point.
//! A dense density-matrix oracle cross-checks them for small spins.

// `!(x > 0.0)` is used on purpose so that NaN takes the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod closed_form;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod spin_model;
pub mod squeezing;

pub use closed_form::{full_observables, Observables};
pub use error::{Error, Result};
pub use optimize::{minimize_xi2, MinimizationResult, PowerLawFit};
pub use spin_model::{InitialState, ModelParams};
pub use squeezing::{squeezing_metrics, SqueezingMetrics};
