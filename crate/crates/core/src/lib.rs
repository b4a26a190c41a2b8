//! Random unitary channels `ρ ↦ Σ w_i U_i ρ U_i*`, their complementary and
//! product channels, minimum-output-entropy estimation, eigenvalue statistics
//! of induced random states, and the closed-form bounds behind the existence
//! of channels that violate additivity of minimum output entropy.
//!
//! All logarithms are natural. Sampling is keyed by [`rng::RngStream`] so every
//! Monte Carlo result is reproducible and independent of the thread count.

// `!(x >= 0.0)` is the intended NaN-rejecting domain check throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channel;
pub mod entropy;
mod error;
pub mod linalg;
pub mod moe;
pub mod quadrature;
pub mod rng;
pub mod state;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64;
