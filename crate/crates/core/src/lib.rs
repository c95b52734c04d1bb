//! Numerical tools for Hardy–Littlewood type mixed-norm inequalities on
//! multilinear forms over `ℓ_p` spaces, with emphasis on the critical case
//! `p = m`.
//!
//! - [`exponents`]: exact exponent arithmetic on rationals extended by `∞`.
//! - [`tensor`]: dense multilinear forms, mixed norms, weak `ℓ_p` norms.
//! - [`opnorm`]: operator norms on products of `ℓ_p` balls.
//! - [`witnesses`]: extremal and random test forms.
//! - [`harness`]: experiment runner and reports.

pub mod error;
pub mod exponents;
pub mod harness;
pub mod io;
pub mod opnorm;
pub mod rng;
pub mod scalar;
pub mod tensor;
pub mod witnesses;

pub use error::{Error, Result};
pub use exponents::{ExponentVector, ExtScalar, VariantTag};
pub use io::DynForm;
pub use scalar::{Scalar, ScalarField, C64};
pub use tensor::MultilinearForm;
