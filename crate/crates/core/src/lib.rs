//! Numerical toolkit for the distance from `z̄ⁿχ_E` to `H^∞` when `E` is a
//! finite union of arcs on the unit circle.

pub mod analytic;
pub mod circle;
pub mod closed_forms;
pub mod conformal;
pub mod error;
pub mod hankel;
pub mod toeplitz;

pub use circle::{Arc, ArcSet, FourierCoefficient};
pub use error::{Error, Result};
