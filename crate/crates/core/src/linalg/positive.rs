use super::eigen::Spectrum;
use super::{Hermitian, Matrix};
use crate::error::{Error, Result};

/// Relative band below zero within which eigenvalues are clamped to 0.
pub const PSD_CLAMP_TOL: f64 = 1e-12;

/// A positive semidefinite Hermitian matrix together with its spectrum.
///
/// `min_eigenvalue` is the smallest computed eigenvalue before clamping;
/// [`Positive::is_strict`] tests the positive definite refinement.
#[derive(Clone, Debug, PartialEq)]
pub struct Positive {
    base: Hermitian,
    spectrum: Spectrum,
    min_eigenvalue: f64,
}

impl Positive {
    /// Positive definite refinement: every eigenvalue must be `> 0`.
    pub fn strict(h: Hermitian) -> Result<Self> {
        let spectrum = h.eigen()?;
        let min = spectrum.eigenvalues().last().copied().unwrap_or(0.0);
        if min <= 0.0 {
            return Err(Error::NotPositive {
                eigenvalue: min,
                tolerance: 0.0,
            });
        }
        Ok(Self {
            base: h,
            spectrum,
            min_eigenvalue: min,
        })
    }

    /// Semidefinite refinement. Eigenvalues in `[−1e-12·(1+‖A‖₂), 0)` are
    /// clamped to zero and the matrix is rebuilt from the clamped spectrum;
    /// anything more negative is rejected.
    pub fn psd(h: Hermitian) -> Result<Self> {
        let spectrum = h.eigen()?;
        Self::psd_from_parts(h, spectrum)
    }

    fn psd_from_parts(h: Hermitian, spectrum: Spectrum) -> Result<Self> {
        let values = spectrum.eigenvalues();
        let min = values.last().copied().unwrap_or(0.0);
        if min >= 0.0 {
            return Ok(Self {
                base: h,
                spectrum,
                min_eigenvalue: min,
            });
        }
        let spectral_norm = values[0].abs().max(min.abs());
        let tolerance = PSD_CLAMP_TOL * (1.0 + spectral_norm);
        if min < -tolerance {
            return Err(Error::NotPositive {
                eigenvalue: min,
                tolerance: -tolerance,
            });
        }
        let spectrum = spectrum.map(|x| x.max(0.0));
        let base = spectrum.compose(spectrum.eigenvalues());
        Ok(Self {
            base,
            spectrum,
            min_eigenvalue: min,
        })
    }

    /// Builds `V·diag(λ)·V*` from a known nonnegative spectrum.
    pub fn from_spectrum(spectrum: Spectrum) -> Result<Self> {
        let min = spectrum.eigenvalues().last().copied().unwrap_or(0.0);
        if let Some(&bad) = spectrum.eigenvalues().iter().find(|x| !x.is_finite()) {
            return Err(Error::SingularFunction { eigenvalue: bad });
        }
        if min < 0.0 {
            return Err(Error::NotPositive {
                eigenvalue: min,
                tolerance: 0.0,
            });
        }
        let base = spectrum.compose(spectrum.eigenvalues());
        Ok(Self {
            base,
            spectrum,
            min_eigenvalue: min,
        })
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.base
    }

    pub fn matrix(&self) -> &Matrix {
        self.base.matrix()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn is_strict(&self) -> bool {
        self.min_eigenvalue > 0.0
    }

    /// Largest eigenvalue, which equals the operator norm.
    pub fn spectral_norm(&self) -> f64 {
        self.spectrum.eigenvalues()[0]
    }

    /// `f(A)` as a positive matrix, reusing this spectrum. `f` must be
    /// finite and nonnegative on the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Positive> {
        if let Some(&x) = self.eigenvalues().iter().find(|&&x| !f(x).is_finite()) {
            return Err(Error::SingularFunction { eigenvalue: x });
        }
        Self::from_spectrum(self.spectrum.map(&f))
    }

    /// `A^p` with the convention `0^p = 0` for `p > 0`; negative powers need
    /// a strictly positive matrix. `A^0` of a strictly positive matrix is
    /// the exact identity.
    pub fn powf(&self, p: f64) -> Result<Positive> {
        if p == 1.0 {
            return Ok(self.clone());
        }
        if p == 0.0 && self.is_strict() {
            return Positive::strict(Hermitian::from_exact(Matrix::identity(self.dim())));
        }
        self.map(|x| if x == 0.0 && p > 0.0 { 0.0 } else { x.powf(p) })
    }

    /// `A + shift·I` for `shift ≥ 0`; the eigenvectors are unchanged.
    pub fn shifted(&self, shift: f64) -> Positive {
        let spectrum = self.spectrum.map(|x| x + shift);
        Positive {
            base: self.base.shifted(shift),
            min_eigenvalue: self.min_eigenvalue + shift,
            spectrum,
        }
    }
}

/// `V·diag(f(λ))·V*` for the spectrum of `a`.
pub fn matrix_function(a: &Positive, f: impl Fn(f64) -> f64) -> Result<Hermitian> {
    let values: Vec<f64> = a.eigenvalues().iter().map(|&x| f(x)).collect();
    if let Some(i) = values.iter().position(|y| !y.is_finite()) {
        return Err(Error::SingularFunction {
            eigenvalue: a.eigenvalues()[i],
        });
    }
    Ok(a.spectrum().compose(&values))
}
