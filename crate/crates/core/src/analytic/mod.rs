//! Boundary fields, analytic completions and near-extremal functions.

pub mod completion;
pub mod elliptic;
pub mod field;
pub mod khavinson;
pub mod quadrature;

pub use completion::{analytic_completion, analytic_completion_derivative, inner_remap, InnerRemap};
pub use elliptic::{complete_k, elliptic_f, solve_modulus};
pub use field::{conjugate_fft, distribution_check, stein_weiss, BoundaryField, DistributionReport};
pub use khavinson::{khavinson_witness, ArcBlaschke, DiskToRectangle, KhavinsonWitness};
