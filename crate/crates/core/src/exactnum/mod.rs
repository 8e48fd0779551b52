//! Scalars, small dense matrices, quaternions, octonions and the
//! `SO(3) × SO(3)` diagonalization.

mod matrix;
mod octonion;
mod parse;
mod quaternion;
mod scalar;
mod so3;

pub use matrix::Matrix;
pub use octonion::{cross7, g2_phi_coefficients, Octonion};
pub use quaternion::Quaternion;
pub use scalar::{Backend, QuadExt, Scalar};
pub use so3::{so3_diagonalize, Diagonalization};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("quadratic extensions Q(sqrt {0}) and Q(sqrt {1}) cannot be mixed")]
    ExtensionMismatch(u64, u64),
    #[error("float and exact scalars cannot be mixed implicitly")]
    MixedBackend,
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative scalar")]
    NegativeSqrt,
    #[error("not representable in the requested backend: {0}")]
    NotRepresentable(String),
    #[error("cannot parse scalar literal {0:?}")]
    Parse(String),
    #[error("singular input (|det| = {0:e})")]
    SingularInput(f64),
    #[error("iterative solver did not converge")]
    NoConvergence,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
