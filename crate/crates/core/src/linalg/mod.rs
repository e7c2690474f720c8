//! Exact dense linear algebra over prime fields.

mod field;
mod matrix;
pub mod poly;

pub use field::{Fp, Scalar, MAX_MODULUS};
pub use matrix::{Matrix, Rref};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u32),
}
