//! Seeded random matrix ensembles.
//!
//! The base generator is SplitMix64 (Steele, Lea & Flood 2014) used in
//! counter mode: the k-th output of a stream with seed `s` is
//! `mix(s + (k+1)·0x9E3779B97F4A7C15)` where
//!
//! ```text
//! mix(z): z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!         z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!         z ^ (z >> 31)
//! ```
//!
//! with wrapping 64-bit arithmetic. Uniforms in `[0, 1)` take the top 53
//! bits (`(x >> 11)·2⁻⁵³`); standard normals use the Box–Muller cosine
//! branch `√(−2 ln(1 − u₁))·cos(2π u₂)`. Sub-streams are derived with
//! [`split_seed`]`(seed, i) = mix(seed ^ (i·0x9E3779B97F4A7C15))`, which is a
//! bijection in `i` for fixed `seed`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Hermitian, Matrix, Positive, Spectrum};

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_2: u64 = 0x94D0_49BB_1331_11EB;

/// Default condition-number target.
pub const DEFAULT_CONDITION: f64 = 100.0;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_2);
    z ^ (z >> 31)
}

/// Derives the seed of sub-stream `index` from `seed`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ index.wrapping_mul(GOLDEN_GAMMA))
}

/// Counter-mode SplitMix64 stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Pd,
    PsdRankDeficient { rank: usize },
    CommutingPair,
    HermitianIndefinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub kind: EnsembleKind,
    pub condition_target: f64,
    pub field: Field,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(dim: usize, kind: EnsembleKind, seed: u64) -> Self {
        Self {
            dim,
            kind,
            condition_target: DEFAULT_CONDITION,
            field: Field::Complex,
            seed,
        }
    }

    pub fn with_condition(mut self, kappa: f64) -> Self {
        self.condition_target = kappa;
        self
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if !(self.condition_target >= 1.0 && self.condition_target.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "condition_target",
                value: self.condition_target,
                reason: "must be a finite value >= 1",
            });
        }
        if let EnsembleKind::PsdRankDeficient { rank } = self.kind {
            if rank >= self.dim {
                return Err(Error::InvalidRank { rank, n: self.dim });
            }
        }
        Ok(())
    }

    fn expect_kind(&self, ok: bool) -> Result<()> {
        if !ok {
            return Err(self.wrong_kind());
        }
        self.validate()
    }

    fn wrong_kind(&self) -> Error {
        Error::Shape(format!("ensemble kind {:?} not valid here", self.kind))
    }
}

/// `(G + G*)/2` with independent standard normal entries (imaginary parts
/// zero for the real field).
pub fn random_hermitian(dim: usize, field: Field, seed: u64) -> Hermitian {
    let mut rng = SplitMix64::new(seed);
    let mut g = Matrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let re = rng.next_normal();
            let im = match field {
                Field::Real => 0.0,
                Field::Complex => rng.next_normal(),
            };
            g.set(i, j, Complex64::new(re, im));
        }
    }
    Hermitian::symmetrize(g.add(&g.adjoint()).expect("same dim").scale(0.5))
}

/// Random unitary: the eigenvector matrix of a random Hermitian draw.
pub fn random_unitary(dim: usize, field: Field, seed: u64) -> Result<Matrix> {
    Ok(random_hermitian(dim, field, seed).eigen()?.eigenvectors().clone())
}

/// `count` values on `[κ^{-1/2}, κ^{1/2}]`. With two or more values both
/// endpoints are included, so the spread is exactly `κ`; the rest are
/// log-uniform. A Fisher–Yates shuffle places the endpoints at random
/// positions (this matters for commuting pairs sharing eigenvectors).
fn log_uniform(rng: &mut SplitMix64, count: usize, kappa: f64) -> Vec<f64> {
    let span = kappa.ln();
    let mut values: Vec<f64> = (0..count)
        .map(|i| match (i, count) {
            (0, 2..) => kappa.sqrt(),
            (1, _) => 1.0 / kappa.sqrt(),
            _ => ((rng.next_f64() - 0.5) * span).exp(),
        })
        .collect();
    for i in (1..count).rev() {
        values.swap(i, rng.below(i as u64 + 1) as usize);
    }
    values
}

fn positive_from(q: Matrix, diag: Vec<f64>) -> Result<Positive> {
    let spectrum = Spectrum::sorted(diag, q);
    Positive::strict(spectrum.compose(spectrum.eigenvalues()))
}

/// `Q·diag(λ)·Q*` with `λ` log-uniform on `[κ^{-1/2}, κ^{1/2}]` and the
/// two endpoints attained (for `dim ≥ 2`), so `cond(A) = κ`.
pub fn random_pd(spec: &EnsembleSpec) -> Result<Positive> {
    spec.expect_kind(matches!(spec.kind, EnsembleKind::Pd))?;
    let q = random_unitary(spec.dim, spec.field, split_seed(spec.seed, 0))?;
    let mut rng = SplitMix64::new(split_seed(spec.seed, 1));
    positive_from(q, log_uniform(&mut rng, spec.dim, spec.condition_target))
}

/// Commuting pair sharing the unitary `Q` with independent diagonals.
pub fn random_commuting_pair(spec: &EnsembleSpec) -> Result<(Positive, Positive)> {
    commuting_pair_with_subseeds(spec, split_seed(spec.seed, 1), split_seed(spec.seed, 2))
}

/// As [`random_commuting_pair`] with explicit seeds for the two diagonals;
/// equal seeds give `A = B`.
pub fn commuting_pair_with_subseeds(spec: &EnsembleSpec, first: u64, second: u64) -> Result<(Positive, Positive)> {
    spec.expect_kind(matches!(spec.kind, EnsembleKind::CommutingPair))?;
    let q = random_unitary(spec.dim, spec.field, split_seed(spec.seed, 0))?;
    let d1 = log_uniform(&mut SplitMix64::new(first), spec.dim, spec.condition_target);
    let d2 = log_uniform(&mut SplitMix64::new(second), spec.dim, spec.condition_target);
    Ok((positive_from(q.clone(), d1)?, positive_from(q, d2)?))
}

/// Semidefinite matrix with exactly `dim − rank` zero eigenvalues.
pub fn random_psd_rank_deficient(spec: &EnsembleSpec) -> Result<Positive> {
    let rank = match spec.kind {
        EnsembleKind::PsdRankDeficient { rank } => rank,
        _ => return Err(spec.wrong_kind()),
    };
    spec.validate()?;
    let q = random_unitary(spec.dim, spec.field, split_seed(spec.seed, 0))?;
    let mut rng = SplitMix64::new(split_seed(spec.seed, 1));
    let mut diag = log_uniform(&mut rng, rank, spec.condition_target);
    diag.resize(spec.dim, 0.0);
    // The spectrum is known exactly; keep it rather than re-decomposing.
    Positive::from_spectrum(Spectrum::sorted(diag, q))
}

/// Dispatches on `spec.kind` for single-matrix ensembles.
pub fn random_matrix(spec: &EnsembleSpec) -> Result<Positive> {
    match spec.kind {
        EnsembleKind::Pd => random_pd(spec),
        EnsembleKind::PsdRankDeficient { .. } => random_psd_rank_deficient(spec),
        _ => Err(spec.wrong_kind()),
    }
}

/// `count` independent matrices of the ensemble, the i-th drawn with seed
/// `split_seed(spec.seed, i)`.
pub fn random_family(spec: &EnsembleSpec, count: usize) -> Result<Vec<Positive>> {
    (0..count)
        .map(|i| {
            random_matrix(&EnsembleSpec {
                seed: split_seed(spec.seed, i as u64),
                ..*spec
            })
        })
        .collect()
}

/// Two lists of `m` inputs. For single-matrix kinds the A-list uses seed
/// `split_seed(seed, 0)` and the B-list `split_seed(seed, 1)`; commuting
/// pairs draw pair `i` from `split_seed(seed, i)`.
pub fn random_pair_lists(spec: &EnsembleSpec, m: usize) -> Result<(Vec<Positive>, Vec<Positive>)> {
    match spec.kind {
        EnsembleKind::CommutingPair => {
            let pairs = (0..m)
                .map(|i| {
                    random_commuting_pair(&EnsembleSpec {
                        seed: split_seed(spec.seed, i as u64),
                        ..*spec
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(pairs.into_iter().unzip())
        }
        _ => {
            let a = random_family(&EnsembleSpec { seed: split_seed(spec.seed, 0), ..*spec }, m)?;
            let b = random_family(&EnsembleSpec { seed: split_seed(spec.seed, 1), ..*spec }, m)?;
            Ok((a, b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::singular_values;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of SplitMix64 seeded with 1234567
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
    }

    #[test]
    fn split_seed_is_pure_and_distinct() {
        assert_eq!(split_seed(99, 3), split_seed(99, 3));
        let mut rng = SplitMix64::new(7);
        for _ in 0..1000 {
            let s = rng.next_u64();
            assert_ne!(split_seed(s, 0), split_seed(s, 1));
        }
    }

    #[test]
    fn pd_is_deterministic() {
        let spec = EnsembleSpec::new(4, EnsembleKind::Pd, 5);
        let a = random_pd(&spec).unwrap();
        let b = random_pd(&spec).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn one_by_one_pd_in_range() {
        for seed in 0..50 {
            let a = random_pd(&EnsembleSpec::new(1, EnsembleKind::Pd, seed)).unwrap();
            let x = a.matrix().get(0, 0).re;
            assert!((0.1..=10.0).contains(&x), "{x}");
        }
    }

    #[test]
    fn rank_edge_cases() {
        let spec = EnsembleSpec::new(3, EnsembleKind::PsdRankDeficient { rank: 0 }, 1);
        assert_eq!(random_psd_rank_deficient(&spec).unwrap().matrix(), &Matrix::zeros(3));

        let spec = EnsembleSpec::new(3, EnsembleKind::PsdRankDeficient { rank: 3 }, 1);
        assert_eq!(
            random_psd_rank_deficient(&spec),
            Err(Error::InvalidRank { rank: 3, n: 3 })
        );

        // rank one: λ·vv*
        let spec = EnsembleSpec::new(4, EnsembleKind::PsdRankDeficient { rank: 1 }, 8);
        let p = random_psd_rank_deficient(&spec).unwrap();
        let lambda = p.eigenvalues()[0];
        let v: Vec<Complex64> = (0..4).map(|i| p.spectrum().eigenvectors().get(i, 0)).collect();
        let vv = Matrix::from_fn(4, |i, j| v[i] * v[j].conj() * lambda);
        assert!(vv.sub(p.matrix()).unwrap().frobenius_norm() < 1e-14 * lambda);
        let s = singular_values(p.matrix()).unwrap();
        assert!(s.values()[1] < 1e-12 * s.largest());
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let spec = EnsembleSpec::new(3, EnsembleKind::CommutingPair, 1);
        assert!(random_pd(&spec).is_err());
        let spec = EnsembleSpec::new(3, EnsembleKind::Pd, 1).with_condition(0.5);
        assert!(random_pd(&spec).is_err());
    }
}
