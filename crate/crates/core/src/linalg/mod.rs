//! Dense complex matrices, Hermitian eigendecomposition and spectral
//! matrix functions.

mod eigen;
mod hermitian;
pub mod io;
mod matrix;
mod positive;

pub use eigen::{hermitian_eigendecompose, jacobi_singular_values, Spectrum, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use hermitian::{Hermitian, HERMITIAN_TOL};
pub use matrix::Matrix;
pub use io::{matrix_from_json, matrix_to_json};
pub use positive::{matrix_function, Positive, PSD_CLAMP_TOL};

use crate::error::{Error, Result};

/// Sum of a nonempty list of Hermitian matrices of equal dimension.
pub fn sum_matrices<'a>(items: impl IntoIterator<Item = &'a Hermitian>) -> Result<Hermitian> {
    let mut iter = items.into_iter();
    let first = iter.next().ok_or(Error::EmptySum)?;
    iter.try_fold(first.clone(), |acc, h| acc.add(h))
}

/// Sum of positive matrices, re-decomposed as a positive matrix.
pub fn sum_positive<'a>(items: impl IntoIterator<Item = &'a Positive>) -> Result<Positive> {
    Positive::psd(sum_matrices(items.into_iter().map(Positive::hermitian))?)
}

/// `X·inner·X` for Hermitian `X` and positive `inner`, assembled as `Y·Y*`
/// with `Y = X·inner^{1/2}` so the result is positive semidefinite by
/// construction.
pub fn congruence(outer: &Hermitian, inner: &Positive) -> Result<Hermitian> {
    let root = inner.spectrum().compose(
        &inner
            .eigenvalues()
            .iter()
            .map(|&x| x.max(0.0).sqrt())
            .collect::<Vec<_>>(),
    );
    let y = outer.matrix().matmul(root.matrix())?;
    Ok(Hermitian::symmetrize(y.matmul(&y.adjoint())?))
}
