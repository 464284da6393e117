use num_complex::Complex64;

use super::eigen::{hermitian_eigendecompose, Spectrum};
use super::Matrix;
use crate::error::{Error, Result};

/// Relative tolerance on `‖A − A*‖_F` accepted by [`Hermitian::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A matrix known to be Hermitian. Construction replaces the input by
/// `(A + A*)/2` and keeps the Frobenius norm of `A − A*` as `defect`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian {
    base: Matrix,
    defect: f64,
}

impl Hermitian {
    /// Accepts `m` if `‖m − m*‖_F ≤ 1e-12·(1 + ‖m‖_F)`.
    pub fn new(m: Matrix) -> Result<Self> {
        let tolerance = HERMITIAN_TOL * (1.0 + m.frobenius_norm());
        let h = Self::symmetrize(m);
        if h.defect > tolerance {
            return Err(Error::NotHermitian {
                defect: h.defect,
                tolerance,
            });
        }
        Ok(h)
    }

    /// Symmetrizes without a tolerance check. Used for products that are
    /// Hermitian in exact arithmetic.
    pub(crate) fn symmetrize(m: Matrix) -> Self {
        let n = m.dim();
        let mut defect_sq = 0.0;
        let mut out = m.clone();
        for i in 0..n {
            let d = m.get(i, i);
            defect_sq += 4.0 * d.im * d.im;
            out.set(i, i, Complex64::new(d.re, 0.0));
            for j in (i + 1)..n {
                let a = m.get(i, j);
                let b = m.get(j, i).conj();
                defect_sq += 2.0 * (a - b).norm_sqr();
                let avg = (a + b) * 0.5;
                out.set(i, j, avg);
                out.set(j, i, avg.conj());
            }
        }
        Self {
            base: out,
            defect: defect_sq.sqrt(),
        }
    }

    /// Wraps a matrix that is exactly Hermitian by construction.
    pub(crate) fn from_exact(base: Matrix) -> Self {
        debug_assert!(base == base.adjoint());
        Self { base, defect: 0.0 }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.base
    }

    pub fn into_matrix(self) -> Matrix {
        self.base
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn eigen(&self) -> Result<Spectrum> {
        hermitian_eigendecompose(self)
    }

    pub fn add(&self, other: &Hermitian) -> Result<Hermitian> {
        Ok(Self::from_exact(self.base.add(&other.base)?))
    }

    pub fn scale(&self, c: f64) -> Hermitian {
        Self::from_exact(self.base.scale(c))
    }

    /// `A + shift·I`.
    pub fn shifted(&self, shift: f64) -> Hermitian {
        let mut base = self.base.clone();
        for i in 0..base.dim() {
            let d = base.get(i, i);
            base.set(i, i, Complex64::new(d.re + shift, 0.0));
        }
        Self::from_exact(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizes_and_records_defect() {
        let m = Matrix::from_entries(
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, 1e-14),
                Complex64::new(2.0, 0.0),
                Complex64::new(3.0, 0.0),
            ],
        )
        .unwrap();
        let h = Hermitian::new(m).unwrap();
        assert!(h.defect() > 0.0);
        assert_eq!(h.matrix().get(0, 1), h.matrix().get(1, 0).conj());
        assert_eq!(h.matrix().adjoint(), *h.matrix());
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(Hermitian::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exact_hermitian_is_untouched() {
        let m = Matrix::from_entries(
            2,
            vec![
                Complex64::new(1.5, 0.0),
                Complex64::new(0.25, -0.75),
                Complex64::new(0.25, 0.75),
                Complex64::new(-2.0, 0.0),
            ],
        )
        .unwrap();
        let h = Hermitian::new(m.clone()).unwrap();
        assert_eq!(h.defect(), 0.0);
        assert_eq!(h.into_matrix(), m);
    }
}
