//! The weighted geometric mean `A ♯_t B = A^{1/2}(A^{-1/2} B A^{-1/2})^t A^{1/2}`
//! and the composite matrix expressions built from sums of means.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{congruence, sum_positive, Hermitian, Matrix, Positive};

/// Default relative regularization for the semidefinite mean.
pub const DEFAULT_EPS_SCALE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanParams {
    pub t: f64,
    pub r: f64,
    pub s: f64,
}

impl MeanParams {
    pub fn new(t: f64, r: f64, s: f64) -> Result<Self> {
        check_weight(t)?;
        check_positive("r", r)?;
        check_positive("s", s)?;
        Ok(Self { t, r, s })
    }
}

pub(crate) fn check_weight(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "weight must lie in [0, 1]",
        });
    }
    Ok(())
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        });
    }
    Ok(())
}

fn require_strict(a: &Positive) -> Result<()> {
    if !a.is_strict() {
        return Err(Error::NotStrictlyPositive {
            min_eigenvalue: a.min_eigenvalue(),
        });
    }
    Ok(())
}

/// `A ♯_t B` for strictly positive definite `A` and `B`.
///
/// Evaluated in the eigenbasis of `A = U·diag(d)·U*`: with
/// `C = diag(d)^{-1/2}·U*BU·diag(d)^{-1/2} = W·diag(c)·W*` the mean is
/// `Y·Y*` where `Y = U·diag(d)^{1/2}·W·diag(c)^{t/2}`. The endpoints
/// `t = 0` and `t = 1` return `A` and `B` unchanged.
pub fn geometric_mean(a: &Positive, b: &Positive, t: f64) -> Result<Positive> {
    check_weight(t)?;
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!(
            "mean of {}x{} and {}x{} matrices",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    require_strict(a)?;
    require_strict(b)?;
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }

    let n = a.dim();
    let u = a.spectrum().eigenvectors();
    let root_d: Vec<f64> = a.eigenvalues().iter().map(|x| x.sqrt()).collect();

    let b_rot = Hermitian::symmetrize(u.adjoint().matmul(b.matrix())?.matmul(u)?);
    let c = Matrix::from_fn(n, |i, j| b_rot.matrix().get(i, j) / (root_d[i] * root_d[j]));
    let c = Positive::psd(Hermitian::symmetrize(c))?;

    let w = c.spectrum().eigenvectors();
    let weights: Vec<f64> = c.eigenvalues().iter().map(|&x| x.powf(0.5 * t)).collect();
    let scaled = Matrix::from_fn(n, |i, j| w.get(i, j) * (root_d[i] * weights[j]));
    let y = u.matmul(&scaled)?;
    let g = Hermitian::symmetrize(y.matmul(&y.adjoint())?);
    let g = Positive::psd(g)?;
    if !g.is_strict() {
        return Err(Error::NotPositive {
            eigenvalue: g.min_eigenvalue(),
            tolerance: 0.0,
        });
    }
    Ok(g)
}

/// A regularized mean and the absolute shift that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularizedMean {
    pub mean: Positive,
    pub epsilon: f64,
}

/// `(A + εI) ♯_t (B + εI)` with `ε = eps_scale·(1 + max(‖A‖₂, ‖B‖₂))`.
///
/// This is a surrogate for semidefinite inputs, not a limit: the shift is
/// returned so callers can report it.
pub fn psd_geometric_mean(a: &Positive, b: &Positive, t: f64, eps_scale: f64) -> Result<RegularizedMean> {
    check_positive("epsilon", eps_scale)?;
    let epsilon = eps_scale * (1.0 + a.spectral_norm().max(b.spectral_norm()));
    let mean = geometric_mean(&a.shifted(epsilon), &b.shifted(epsilon), t)?;
    Ok(RegularizedMean { mean, epsilon })
}

/// How a mean is formed for a pair of inputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanRule {
    /// Strictly positive definite inputs only.
    Exact,
    /// Shift both inputs by `eps_scale·(1 + max norm)` first.
    Regularized { eps_scale: f64 },
}

impl MeanRule {
    /// The mean and, for the regularized rule, the shift used.
    pub fn mean(&self, a: &Positive, b: &Positive, t: f64) -> Result<(Positive, Option<f64>)> {
        match *self {
            MeanRule::Exact => Ok((geometric_mean(a, b, t)?, None)),
            MeanRule::Regularized { eps_scale } => {
                let r = psd_geometric_mean(a, b, t, eps_scale)?;
                Ok((r.mean, Some(r.epsilon)))
            }
        }
    }
}

pub(crate) fn check_lists(a: &[Positive], b: &[Positive]) -> Result<usize> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySum);
    }
    if a.len() != b.len() {
        return Err(Error::Shape(format!(
            "{} A matrices but {} B matrices",
            a.len(),
            b.len()
        )));
    }
    let n = a[0].dim();
    if let Some(bad) = a.iter().chain(b).find(|m| m.dim() != n) {
        return Err(Error::Shape(format!(
            "mixed dimensions {n} and {} in input lists",
            bad.dim()
        )));
    }
    Ok(n)
}

/// Per-pair means `Aᵢ ♯_t Bᵢ` plus the largest regularization shift used.
pub fn pairwise_means(a: &[Positive], b: &[Positive], t: f64, rule: MeanRule) -> Result<(Vec<Positive>, Option<f64>)> {
    check_lists(a, b)?;
    let mut eps: Option<f64> = None;
    let means = a
        .iter()
        .zip(b)
        .map(|(ai, bi)| {
            let (g, e) = rule.mean(ai, bi, t)?;
            if let Some(e) = e {
                eps = Some(eps.map_or(e, |prev| prev.max(e)));
            }
            Ok(g)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((means, eps))
}

/// `Σᵢ (Aᵢ ♯_t Bᵢ)^r`. Each power is taken on the mean's own spectrum.
pub fn lhs_main(a: &[Positive], b: &[Positive], t: f64, r: f64) -> Result<Hermitian> {
    lhs_main_with(a, b, t, r, MeanRule::Exact).map(|(h, _)| h.hermitian().clone())
}

/// [`lhs_main`] under an explicit mean rule, returned as a positive matrix
/// with the regularization shift (if any).
pub fn lhs_main_with(a: &[Positive], b: &[Positive], t: f64, r: f64, rule: MeanRule) -> Result<(Positive, Option<f64>)> {
    check_positive("r", r)?;
    let (means, eps) = pairwise_means(a, b, t, rule)?;
    let powers = means.iter().map(|g| g.powf(r)).collect::<Result<Vec<_>>>()?;
    Ok((sum_positive(&powers)?, eps))
}

/// `(ΣA)^{r/4} (ΣB)^{r/2} (ΣA)^{r/4}`.
pub fn mid_main(a: &[Positive], b: &[Positive], r: f64) -> Result<Hermitian> {
    check_lists(a, b)?;
    check_positive("r", r)?;
    let sa = sum_positive(a)?;
    let sb = sum_positive(b)?;
    congruence(sa.powf(r / 4.0)?.hermitian(), &sb.powf(r / 2.0)?)
}

/// `(ΣA)^{r/2} (ΣB)^{r/2}`; not Hermitian in general.
pub fn rhs_main(a: &[Positive], b: &[Positive], r: f64) -> Result<Matrix> {
    check_lists(a, b)?;
    check_positive("r", r)?;
    let sa = sum_positive(a)?;
    let sb = sum_positive(b)?;
    sa.powf(r / 2.0)?.matrix().matmul(sb.powf(r / 2.0)?.matrix())
}

/// `(ΣB)^{rt/2} (ΣA)^{(1−t)r} (ΣB)^{rt/2}`, the weight-dependent middle term.
pub fn mid_main_weighted(a: &[Positive], b: &[Positive], t: f64, r: f64) -> Result<Hermitian> {
    check_lists(a, b)?;
    check_weight(t)?;
    check_positive("r", r)?;
    let sa = sum_positive(a)?;
    let sb = sum_positive(b)?;
    congruence(sb.powf(r * t / 2.0)?.hermitian(), &sa.powf((1.0 - t) * r)?)
}

/// `(ΣA)^{(1−t)r} (ΣB)^{rt}`, the weight-dependent right term.
pub fn rhs_main_weighted(a: &[Positive], b: &[Positive], t: f64, r: f64) -> Result<Matrix> {
    check_lists(a, b)?;
    check_weight(t)?;
    check_positive("r", r)?;
    let sa = sum_positive(a)?;
    let sb = sum_positive(b)?;
    sa.powf((1.0 - t) * r)?.matrix().matmul(sb.powf(r * t)?.matrix())
}

/// `det(A)` as a real number for a positive matrix.
pub fn determinant(a: &Positive) -> f64 {
    a.eigenvalues().iter().product()
}
