//! Singular values, unitarily invariant norms and majorization predicates.
//!
//! Dominance in every Ky Fan norm is equivalent to dominance in every
//! unitarily invariant norm, so [`fan_dominance`] is the finite certificate
//! for "for all unitarily invariant norms".

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{jacobi_singular_values, Hermitian, Matrix, Positive};

/// Relative tolerance used by the majorization predicates.
pub const MAJORIZATION_REL_TOL: f64 = 1e-9;

/// Floor applied to `log σ` so zero singular values keep prefix sums finite.
pub const LOG_FLOOR: f64 = -690.0;

/// Nonincreasing, nonnegative singular values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularValues(Vec<f64>);

impl SingularValues {
    /// Sorts nonincreasing and clamps values in `[−1e-12·σ₁, 0)` to zero.
    /// More negative values are kept as zero too; callers pass moduli.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let top = values.first().copied().unwrap_or(0.0).abs();
        for v in values.iter_mut() {
            if *v < 0.0 {
                debug_assert!(*v >= -1e-12 * top, "negative singular value {v}");
                *v = 0.0;
            }
        }
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `σᵢ^p` for every value (order is preserved for `p > 0`).
    pub fn powf(&self, p: f64) -> SingularValues {
        SingularValues(self.0.iter().map(|&x| if x == 0.0 { 0.0 } else { x.powf(p) }).collect())
    }

    pub fn scale(&self, c: f64) -> SingularValues {
        SingularValues(self.0.iter().map(|&x| x * c.abs()).collect())
    }
}

/// Singular values of a general square matrix: square roots of the
/// eigenvalues of `M*M`, obtained by one-sided Jacobi on `M` so that `M*M`
/// is never formed. Exactly Hermitian input takes the moduli of its
/// eigenvalues instead.
pub fn singular_values(m: &Matrix) -> Result<SingularValues> {
    if *m == m.adjoint() {
        return singular_values_hermitian(&Hermitian::symmetrize(m.clone()));
    }
    Ok(SingularValues::new(jacobi_singular_values(m)?))
}

/// Singular values of a Hermitian matrix: moduli of its eigenvalues.
pub fn singular_values_hermitian(h: &Hermitian) -> Result<SingularValues> {
    let spectrum = h.eigen()?;
    Ok(SingularValues::new(spectrum.eigenvalues().iter().map(|x| x.abs()).collect()))
}

/// Singular values of a positive matrix are its eigenvalues.
pub fn singular_values_positive(p: &Positive) -> SingularValues {
    SingularValues::new(p.eigenvalues().to_vec())
}

/// A unitarily invariant norm.
///
/// Text form: `schatten:<p>` (with `schatten:inf`), `kyfan:<k>`,
/// `operator`, `trace`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec {
    Schatten(f64),
    KyFan(usize),
    Operator,
    Trace,
}

impl NormSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            NormSpec::Schatten(p) if !(p >= 1.0) => Err(Error::InvalidSchattenExponent(p)),
            NormSpec::KyFan(k) if k == 0 || k > n => Err(Error::InvalidKyFanIndex { k, n }),
            _ => Ok(()),
        }
    }

    /// Schatten p ∈ {1, 1.5, 2, 3, ∞} followed by Ky Fan k = 1..n.
    pub fn default_set(n: usize) -> Vec<NormSpec> {
        let mut specs: Vec<NormSpec> = [1.0, 1.5, 2.0, 3.0, f64::INFINITY]
            .into_iter()
            .map(NormSpec::Schatten)
            .collect();
        specs.extend((1..=n).map(NormSpec::KyFan));
        specs
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Schatten(p) if p.is_infinite() => write!(f, "schatten:inf"),
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
            NormSpec::KyFan(k) => write!(f, "kyfan:{k}"),
            NormSpec::Operator => write!(f, "operator"),
            NormSpec::Trace => write!(f, "trace"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidNormSpec(s.to_string());
        let lower = s.trim().to_ascii_lowercase();
        match lower.split_once(':') {
            None => match lower.as_str() {
                "operator" => Ok(NormSpec::Operator),
                "trace" => Ok(NormSpec::Trace),
                _ => Err(bad()),
            },
            Some(("schatten", p)) => {
                let p = match p {
                    "inf" | "infinity" => f64::INFINITY,
                    _ => p.parse::<f64>().map_err(|_| bad())?,
                };
                if !(p >= 1.0) {
                    return Err(Error::InvalidSchattenExponent(p));
                }
                Ok(NormSpec::Schatten(p))
            }
            Some(("kyfan", k)) => {
                let k = k.parse::<usize>().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(NormSpec::KyFan(k))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn prefix_sum(values: &[f64], k: usize) -> f64 {
    values[..k].iter().sum()
}

/// `|||M|||` from the singular values of `M`.
pub fn ui_norm_of(sv: &SingularValues, spec: NormSpec) -> Result<f64> {
    let n = sv.len();
    spec.validate(n)?;
    let values = sv.values();
    Ok(match spec {
        NormSpec::Operator => sv.largest(),
        NormSpec::Trace => prefix_sum(values, n),
        NormSpec::KyFan(k) => prefix_sum(values, k),
        NormSpec::Schatten(p) if p.is_infinite() => sv.largest(),
        NormSpec::Schatten(p) if p == 1.0 => prefix_sum(values, n),
        NormSpec::Schatten(p) => {
            let top = sv.largest();
            if top == 0.0 {
                0.0
            } else {
                top * values.iter().map(|&x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    })
}

/// `|||M|||` for a general square matrix.
pub fn ui_norm(m: &Matrix, spec: NormSpec) -> Result<f64> {
    spec.validate(m.dim())?;
    ui_norm_of(&singular_values(m)?, spec)
}

/// Verdict of a majorization test with its signed slack.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dominance {
    pub holds: bool,
    /// Minimum over k of (right prefix − left prefix); in log space for
    /// log-majorization.
    pub margin: f64,
}

fn check_lengths(x: usize, y: usize) -> Result<()> {
    if x != y {
        return Err(Error::Shape(format!("sequences of length {x} and {y}")));
    }
    Ok(())
}

/// `x ≺_w y`: every prefix sum of `x` is at most that of `y`, up to
/// `1e-9·(1 + Σy)`.
pub fn weak_majorization(x: &SingularValues, y: &SingularValues) -> Result<Dominance> {
    weak_majorization_with(x, y, MAJORIZATION_REL_TOL)
}

pub fn weak_majorization_with(x: &SingularValues, y: &SingularValues, rel_tol: f64) -> Result<Dominance> {
    check_lengths(x.len(), y.len())?;
    let tol = rel_tol * (1.0 + y.sum());
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut margin = f64::INFINITY;
    for (a, b) in x.values().iter().zip(y.values()) {
        sx += a;
        sy += b;
        margin = margin.min(sy - sx);
    }
    if x.is_empty() {
        margin = 0.0;
    }
    Ok(Dominance {
        holds: margin >= -tol,
        margin,
    })
}

/// Log-majorization of singular values: `Π_{i≤k} σᵢ(x) ≤ Π_{i≤k} σᵢ(y)·(1+1e-9)^k`.
pub fn log_majorization_of(x: &SingularValues, y: &SingularValues) -> Result<Dominance> {
    check_lengths(x.len(), y.len())?;
    let slack = MAJORIZATION_REL_TOL.ln_1p();
    let log = |v: f64| if v > 0.0 { v.ln().max(LOG_FLOOR) } else { LOG_FLOOR };
    let mut lx = 0.0;
    let mut ly = 0.0;
    let mut margin = f64::INFINITY;
    let mut holds = true;
    for (k, (a, b)) in x.values().iter().zip(y.values()).enumerate() {
        lx += log(*a);
        ly += log(*b);
        let d = ly - lx;
        margin = margin.min(d);
        holds &= d >= -((k + 1) as f64) * slack;
    }
    if x.is_empty() {
        margin = 0.0;
    }
    Ok(Dominance { holds, margin })
}

pub fn log_majorization(a: &Matrix, b: &Matrix) -> Result<Dominance> {
    check_lengths(a.dim(), b.dim())?;
    log_majorization_of(&singular_values(a)?, &singular_values(b)?)
}

/// `|||A||| ≤ |||B|||` for every unitarily invariant norm, decided through
/// the Ky Fan norms.
pub fn fan_dominance(a: &Matrix, b: &Matrix) -> Result<Dominance> {
    check_lengths(a.dim(), b.dim())?;
    weak_majorization(&singular_values(a)?, &singular_values(b)?)
}
