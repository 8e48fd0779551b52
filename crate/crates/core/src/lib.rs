//! Mechanical verification of the homogeneous nearly-Kähler classification in
//! dimension six.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactnum`]: tagged scalars (exact rationals, a single quadratic
//!   extension `Q(√d)`, or `f64`), small dense matrices, quaternions,
//!   octonions and the `SO(3) × SO(3)` diagonalization of 3×3 matrices.
//! * [`forms`]: alternating forms on a based vector space, wedge and interior
//!   products, and the exterior derivative of invariant forms driven by a
//!   coframe-differential table.
//! * [`homog`]: reductive homogeneous models `g = h ⊕ m`, the Levi-Civita
//!   connection in Wang form, `∇J` and the almost-Hermitian predicates.
//! * [`stable`]: stable 3-forms in dimension 6 (the `K` map, reconstruction of
//!   `J`, `ρ̂`, the Reyes Carrión equation) and the 3-form on the 7-dimensional
//!   cone.
//! * [`catalog`]: the concrete models `s3s3`, `flag`, `cp3`, `s6` with their
//!   algebraic solvers.

pub mod catalog;
pub mod config;
pub mod exactnum;
pub mod forms;
pub mod homog;
pub mod stable;

pub use config::Tolerance;
pub use exactnum::{Backend, Matrix, NumError, Octonion, Quaternion, Scalar};
pub use forms::{CoframeDifferential, FormError, KForm};
pub use homog::{
    classify, koszul_connection, ClassificationReport, ConnectionMap, HomogError,
    HomogeneousModel, InvariantAcs, InvariantMetric, LieAlgebraData, ReductiveSplit, Verdict,
};
pub use stable::{ReyesCarrionProblem, StableError};
