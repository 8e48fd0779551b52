//! The concrete families: `s3s3` (S³×S³ with the circular coframe and the
//! Ledger–Obata presentation), `flag` (the flag manifold SU(3)/T²), `cp3`
//! (Sp(2)/S¹×Sp(1)) and `s6` (the round sphere in the imaginary octonions).

pub mod cp3;
pub mod flag;
pub mod generators;
mod poly;
pub mod s3s3;
pub mod s6;
mod tables;

use thiserror::Error;

use crate::exactnum::NumError;
use crate::forms::FormError;
use crate::homog::HomogError;
use crate::stable::StableError;



pub use cp3::{build_cp3, cp3_solve, Cp3Locus, CP3MetricParam};
pub use flag::{build_flag, flag_connection_coeffs, flag_solve, FlagLocus, FlagMetricParams};
pub use s6::{
    random_so7, random_unit_point, s6_check, s6_orbit_check, s6_random_samples, S6Report, S6Sample,
    SpherePointFrame,
};
pub use s3s3::{
    canonical_omega, circular_coframe, ledger_obata_model, s3s3_analyze, s3s3_reduce, solve_li2,
    Li2Solution, S3S3Analysis, S3S3TwoForm,
};


#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("2-form is not semi-Kähler: ω∧dω ≠ 0")]
    NotSemiKahler,
    #[error("2-form is degenerate")]
    Degenerate,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point is not a unit vector (|x|² = {0})")]
    NotUnitVector(f64),
    #[error("{0}")]
    Solve(String),
    #[error(transparent)]
    Homog(#[from] HomogError),
    #[error(transparent)]
    Stable(#[from] StableError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Names accepted by [`crate::catalog`] lookups and the command line.
pub const MODEL_NAMES: [&str; 4] = ["s3s3", "flag", "cp3", "s6"];
