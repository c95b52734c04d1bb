//! Dense multilinear forms and the norms built from their coefficients.

mod form;
mod norms;

pub use form::{multi_indices, AnalyticNorm, MultilinearForm, VectorInLp};
pub use norms::{lp_norm, minkowski_gap, mixed_norm, weak_norm};
