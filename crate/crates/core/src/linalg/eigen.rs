//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation acts on a pair of indices `(p, q)`. The off-diagonal entry
//! `a_pq = |a_pq|·e^{iφ}` is annihilated by the unitary
//!
//! ```text
//! G = [  c          s·e^{iφ} ]
//!     [ -s·e^{-iφ}  c        ]
//! ```
//!
//! which is the real Jacobi rotation conjugated by a diagonal phase.
//! Sweeps stop once the off-diagonal Frobenius mass drops below
//! `1e-13·‖A‖_F`; more than 30 sweeps is reported as non-convergence.

use num_complex::Complex64;

use super::{Hermitian, Matrix};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 30;
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Eigenvalues sorted nonincreasing with matching orthonormal eigenvector
/// columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

impl Spectrum {
    /// Sorts the eigenpairs nonincreasing. Ties keep their column order.
    pub(crate) fn sorted(eigenvalues: Vec<f64>, eigenvectors: Matrix) -> Self {
        let n = eigenvalues.len();
        debug_assert_eq!(n, eigenvectors.dim());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
        if order.iter().enumerate().all(|(i, &o)| i == o) {
            return Self {
                eigenvalues,
                eigenvectors,
            };
        }
        let values = order.iter().map(|&o| eigenvalues[o]).collect();
        let vectors = Matrix::from_fn(n, |i, j| eigenvectors.get(i, order[j]));
        Self {
            eigenvalues: values,
            eigenvectors: vectors,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V·diag(values)·V*`, assembled from the upper triangle so the result
    /// is exactly Hermitian.
    pub fn compose(&self, values: &[f64]) -> Hermitian {
        let n = self.dim();
        assert_eq!(values.len(), n);
        let v = &self.eigenvectors;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            let mut d = 0.0;
            for (k, &w) in values.iter().enumerate() {
                d += w * v.get(i, k).norm_sqr();
            }
            out.set(i, i, Complex64::new(d, 0.0));
            for j in (i + 1)..n {
                let mut z = Complex64::new(0.0, 0.0);
                for (k, &w) in values.iter().enumerate() {
                    z += v.get(i, k) * v.get(j, k).conj() * w;
                }
                out.set(i, j, z);
                out.set(j, i, z.conj());
            }
        }
        Hermitian::from_exact(out)
    }

    /// Applies `f` to the eigenvalues; the result keeps these eigenvectors
    /// and is re-sorted.
    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Spectrum {
        let values = self.eigenvalues.iter().map(|&x| f(x)).collect();
        Spectrum::sorted(values, self.eigenvectors.clone())
    }

    /// `‖A − VΛV*‖_F`.
    pub fn reconstruction_residual(&self, a: &Matrix) -> f64 {
        a.sub(self.compose(&self.eigenvalues).matrix())
            .map(|d| d.frobenius_norm())
            .unwrap_or(f64::INFINITY)
    }

    /// `‖V*V − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let v = &self.eigenvectors;
        let vv = v.adjoint().matmul(v).expect("square");
        vv.sub(&Matrix::identity(self.dim()))
            .expect("square")
            .frobenius_norm()
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Deterministic: identical input bits give identical output bits.
pub fn hermitian_eigendecompose(h: &Hermitian) -> Result<Spectrum> {
    let mut a = h.matrix().clone();
    let n = a.dim();
    let mut v = Matrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                residual: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweep += 1;
    }

    let eigenvalues = (0..n).map(|i| a.get(i, i).re).collect();
    Ok(Spectrum::sorted(eigenvalues, v))
}

/// Column-orthogonality threshold for the one-sided sweep.
const ORTHOGONALITY_TOL: f64 = 1e-15;

/// Singular values of a general square matrix by one-sided (Hestenes)
/// Jacobi: the columns of `M` are rotated until mutually orthogonal, which
/// diagonalizes `M*M` implicitly without forming it. Small singular values
/// keep absolute accuracy `~ε·σ₁` instead of the `~√ε·σ₁` of squaring.
/// Unsorted.
pub fn jacobi_singular_values(m: &Matrix) -> Result<Vec<f64>> {
    let n = m.dim();
    // Work on columns stored contiguously.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| m.get(i, j)).collect()).collect();
    let mut sweep = 0;
    loop {
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let mag = gamma.norm();
                if mag == 0.0 || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let rel = mag / (alpha * beta).sqrt();
                worst = worst.max(rel);
                if rel <= ORTHOGONALITY_TOL {
                    continue;
                }
                let (c, se) = rotation(alpha, beta, gamma);
                let se_conj = se.conj();
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * c - se_conj * yq;
                    *y = se * xp + yq * c;
                }
            }
        }
        if worst <= ORTHOGONALITY_TOL {
            break;
        }
        sweep += 1;
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                residual: worst,
            });
        }
    }
    Ok(cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect())
}

/// `(c, s·e^{iφ})` of the rotation annihilating the off-diagonal entry
/// `apq` of the 2×2 Hermitian block `[[app, apq], [conj(apq), aqq]]`.
fn rotation(app: f64, aqq: f64, apq: Complex64) -> (f64, Complex64) {
    let mag = apq.norm();
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, phase * (t * c))
}

fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let (c, se) = rotation(a.get(p, p).re, a.get(q, q).re, apq);
    let se_conj = se.conj();

    let n = a.dim();
    // A ← A·G
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - se_conj * akq);
        a.set(k, q, se * akp + akq * c);
    }
    // A ← G*·A
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - se * aqk);
        a.set(q, k, se_conj * apk + aqk * c);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
    // V ← V·G
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - se_conj * vkq);
        v.set(k, q, se * vkp + vkq * c);
    }
}
