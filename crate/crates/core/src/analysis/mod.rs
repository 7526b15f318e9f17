//! Numerical analysis of the energy: rank-one convexity scans, algebraic
//! estimates and domain checks.

pub mod estimates;
pub mod hessian;
pub mod rank_one;
pub mod sampling;

use crate::tensor::TensorError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("probe leaves GL+: det(F + h a) = {det_plus:e}, det(F - h a) = {det_minus:e}")]
    OutOfDomain { det_plus: f64, det_minus: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}
