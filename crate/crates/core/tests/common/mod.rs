//! Independent oracles for the integration tests: nalgebra's dense
//! decompositions and double-double (compensated) complex arithmetic.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use tsharp_core::Matrix;

pub type NaMatrix = DMatrix<Complex64>;

pub fn to_na(m: &Matrix) -> NaMatrix {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

pub fn frob(m: &NaMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues (descending) and eigenvectors of a Hermitian matrix via
/// nalgebra's tridiagonal QR.
pub fn na_eigh(m: &NaMatrix) -> (Vec<f64>, NaMatrix) {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// `f(M)` for Hermitian `M` through nalgebra.
pub fn na_fn(m: &NaMatrix, f: impl Fn(f64) -> f64) -> NaMatrix {
    let (values, v) = na_eigh(m);
    let d = DMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            Complex64::new(f(values[i]), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let out = &v * d * v.adjoint();
    (&out + out.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Singular values (descending) from nalgebra's bidiagonal SVD.
pub fn na_svd(m: &NaMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Textbook `A^{1/2}(A^{-1/2}BA^{-1/2})^t A^{1/2}`.
pub fn na_mean(a: &NaMatrix, b: &NaMatrix, t: f64) -> NaMatrix {
    let half = na_fn(a, f64::sqrt);
    let inv_half = na_fn(a, |x| 1.0 / x.sqrt());
    let inner = &inv_half * b * &inv_half;
    let inner = (&inner + inner.adjoint()) * Complex64::new(0.5, 0.0);
    let g = &half * na_fn(&inner, |x| x.powf(t)) * &half;
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

// ---- double-double arithmetic -------------------------------------------

#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub fn from(z: Complex64) -> Self {
        Self {
            re: Dd::from(z.re),
            im: Dd::from(z.im),
        }
    }

    pub fn add(self, o: DdC) -> DdC {
        DdC {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn sub(self, o: DdC) -> DdC {
        self.add(DdC {
            re: o.re.neg(),
            im: o.im.neg(),
        })
    }

    pub fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).add(self.im.mul(o.im).neg()),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn conj(self) -> DdC {
        DdC {
            re: self.re,
            im: self.im.neg(),
        }
    }

    pub fn norm_sqr(self) -> f64 {
        let r = self.re.to_f64();
        let i = self.im.to_f64();
        r * r + i * i
    }
}

/// `‖A − V·diag(λ)·V*‖_F` with the product and difference accumulated in
/// double-double arithmetic.
pub fn dd_reconstruction_residual(a: &Matrix, values: &[f64], v: &Matrix) -> f64 {
    let n = a.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut acc = DdC::from(a.get(i, j));
            for (k, &lam) in values.iter().enumerate() {
                let term = DdC::from(v.get(i, k))
                    .mul(DdC::from(v.get(j, k)).conj())
                    .mul(DdC::from(Complex64::new(lam, 0.0)));
                acc = acc.sub(term);
            }
            total += acc.norm_sqr();
        }
    }
    total.sqrt()
}

/// `‖V*V − I‖_F` in double-double arithmetic.
pub fn dd_unitarity_defect(v: &Matrix) -> f64 {
    let n = v.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut acc = DdC::from(Complex64::new(if i == j { -1.0 } else { 0.0 }, 0.0));
            for k in 0..n {
                acc = acc.add(DdC::from(v.get(k, i)).conj().mul(DdC::from(v.get(k, j))));
            }
            total += acc.norm_sqr();
        }
    }
    total.sqrt()
}

/// Double-double product of two matrices, rounded to f64 at the end.
pub fn dd_matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.dim();
    Matrix::from_fn(n, |i, j| {
        let mut acc = DdC::default();
        for k in 0..n {
            acc = acc.add(DdC::from(a.get(i, k)).mul(DdC::from(b.get(k, j))));
        }
        Complex64::new(acc.re.to_f64(), acc.im.to_f64())
    })
}

pub fn rel_frob_error(a: &Matrix, b: &Matrix) -> f64 {
    a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm().max(f64::MIN_POSITIVE)
}
