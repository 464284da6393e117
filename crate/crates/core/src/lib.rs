//! Weighted geometric means of positive definite matrices, unitarily
//! invariant norms, majorization, and executable checks of the matrix
//! inequalities built from them.
//!
//! Everything here is a pure function of its inputs: no global state, no
//! randomized pivoting, and identical input bits give identical output bits.

pub mod ensembles;
pub mod error;
pub mod inequalities;
pub mod linalg;
pub mod means;
pub mod norms;

pub use error::{Error, Result};
pub use linalg::{Hermitian, Matrix, Positive, Spectrum};
