//! Every inequality as an executable predicate.
//!
//! Each `*_terms` function computes the singular values of the terms of one
//! chain so that any number of norms can be evaluated from a single matrix
//! computation; the `check_*` functions wrap that for one norm.

mod report;

pub use report::{
    Chain, Direction, FunctionId, InequalityId, InequalityReport, Params, Term, Tolerance, Verdict,
};

use crate::error::{Error, Result};
use crate::linalg::{congruence, sum_positive, Matrix, Positive};
use crate::means::{check_lists, geometric_mean, pairwise_means, MeanParams, MeanRule};
use crate::norms::{singular_values, singular_values_hermitian, singular_values_positive, NormSpec, SingularValues};

/// Relative bound on `‖AᵢBᵢ − BᵢAᵢ‖_F` accepted as commuting.
pub const COMMUTATOR_TOL: f64 = 1e-10;

/// The four-term chain
/// `(A♯_tB)^r`, `A^r♯_tB^r`, `(B^{rts/2}A^{(1−t)rs}B^{rts/2})^{1/s}`,
/// `|A^{(1−t)rs}B^{rts}|^{1/s}`.
pub fn lemma_chain_terms(a: &Positive, b: &Positive, p: MeanParams) -> Result<Chain> {
    let MeanParams { t, r, s } = MeanParams::new(p.t, p.r, p.s)?;
    let mean = geometric_mean(a, b, t)?;
    let first = singular_values_positive(&mean).powf(r);

    let second = singular_values_positive(&geometric_mean(&a.powf(r)?, &b.powf(r)?, t)?);

    let a_pow = a.powf((1.0 - t) * r * s)?;
    let b_pow = b.powf(r * t * s)?;
    let sandwich = congruence(b.powf(r * t * s / 2.0)?.hermitian(), &a_pow)?;
    let third = singular_values_hermitian(&sandwich)?.powf(1.0 / s);

    let product = a_pow.matrix().matmul(b_pow.matrix())?;
    let fourth = singular_values(&product)?.powf(1.0 / s);

    Ok(Chain::new(
        InequalityId::LemmaChain,
        vec![
            ("(A#_tB)^r".into(), first),
            ("A^r#_tB^r".into(), second),
            ("(B^(rts/2)A^((1-t)rs)B^(rts/2))^(1/s)".into(), third),
            ("|A^((1-t)rs)B^(rts)|^(1/s)".into(), fourth),
        ],
    ))
}

pub fn check_lemma_chain(
    a: &Positive,
    b: &Positive,
    params: MeanParams,
    spec: NormSpec,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let chain = lemma_chain_terms(a, b, params)?;
    chain.report(lemma_params(a.dim(), params, spec), spec, tol)
}

pub fn lemma_params(n: usize, p: MeanParams, spec: NormSpec) -> Params {
    Params {
        t: Some(p.t),
        r: Some(p.r),
        s: Some(p.s),
        ..Params::new(n, spec)
    }
}

/// `|||Σ f(Aᵢ)|||` against `|||f(Σ Aᵢ)|||`; `≤` for convex `f`, `≥` for
/// concave `f`. Terms are listed in that order for both directions.
pub fn bourin_uchiyama_terms(list: &[Positive], f: FunctionId, direction: Direction) -> Result<Chain> {
    f.check_registered()?;
    if !f.is_registered_as(direction) {
        return Err(Error::DirectionMismatch {
            function: f.to_string(),
            direction: direction.as_str(),
        });
    }
    if list.is_empty() {
        return Err(Error::EmptySum);
    }
    let mapped = list
        .iter()
        .map(|a| a.map(|x| f.eval(x)))
        .collect::<Result<Vec<_>>>()?;
    let sum_of_f = singular_values_positive(&sum_positive(&mapped)?);
    let f_of_sum = singular_values_positive(&sum_positive(list)?.map(|x| f.eval(x))?);
    let mut chain = Chain::new(
        InequalityId::BourinUchiyama,
        vec![("sum f(A_i)".into(), sum_of_f), ("f(sum A_i)".into(), f_of_sum)],
    );
    chain.direction = direction;
    Ok(chain)
}

pub fn check_bourin_uchiyama(
    list: &[Positive],
    f: FunctionId,
    direction: Direction,
    spec: NormSpec,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let chain = bourin_uchiyama_terms(list, f, direction)?;
    let params = Params {
        m: Some(list.len()),
        function_id: Some(f),
        direction: Some(direction),
        ..Params::new(list[0].dim(), spec)
    };
    chain.report(params, spec, tol)
}

struct Sums {
    a: Positive,
    b: Positive,
}

impl Sums {
    fn new(a: &[Positive], b: &[Positive]) -> Result<Self> {
        Ok(Self {
            a: sum_positive(a)?,
            b: sum_positive(b)?,
        })
    }

    /// `(ΣA)^{r/4}(ΣB)^{r/2}(ΣA)^{r/4}` and `(ΣA)^{r/2}(ΣB)^{r/2}`.
    fn printed(&self, r: f64) -> Result<[(String, SingularValues); 2]> {
        let mid = congruence(self.a.powf(r / 4.0)?.hermitian(), &self.b.powf(r / 2.0)?)?;
        let rhs = self.a.powf(r / 2.0)?.matrix().matmul(self.b.powf(r / 2.0)?.matrix())?;
        Ok([
            ("(sum A)^(r/4)(sum B)^(r/2)(sum A)^(r/4)".into(), singular_values_hermitian(&mid)?),
            ("(sum A)^(r/2)(sum B)^(r/2)".into(), singular_values(&rhs)?),
        ])
    }

    /// `(ΣB)^{rt/2}(ΣA)^{(1−t)r}(ΣB)^{rt/2}` and `(ΣA)^{(1−t)r}(ΣB)^{rt}`.
    fn weighted(&self, t: f64, r: f64) -> Result<[(String, SingularValues); 2]> {
        let a_pow = self.a.powf((1.0 - t) * r)?;
        let mid = congruence(self.b.powf(r * t / 2.0)?.hermitian(), &a_pow)?;
        let rhs = a_pow.matrix().matmul(self.b.powf(r * t)?.matrix())?;
        Ok([
            ("(sum B)^(rt/2)(sum A)^((1-t)r)(sum B)^(rt/2)".into(), singular_values_hermitian(&mid)?),
            ("(sum A)^((1-t)r)(sum B)^(rt)".into(), singular_values(&rhs)?),
        ])
    }
}

fn check_main_inputs(a: &[Positive], b: &[Positive], t: f64, r: f64) -> Result<()> {
    check_lists(a, b)?;
    MeanParams::new(t, r, 1.0)?;
    Ok(())
}

/// Three-term chain `Σ(Aᵢ♯_tBᵢ)^r ≤ middle ≤ right`. With `printed_form`
/// the right-hand terms are the weight-free `(ΣA)^{r/4}(ΣB)^{r/2}(ΣA)^{r/4}`
/// and `(ΣA)^{r/2}(ΣB)^{r/2}`; otherwise the weight-dependent terms
/// `(ΣB)^{rt/2}(ΣA)^{(1−t)r}(ΣB)^{rt/2}` and `(ΣA)^{(1−t)r}(ΣB)^{rt}`.
pub fn main_theorem_terms(
    a: &[Positive],
    b: &[Positive],
    t: f64,
    r: f64,
    printed_form: bool,
    rule: MeanRule,
) -> Result<Chain> {
    check_main_inputs(a, b, t, r)?;
    let (means, eps) = pairwise_means(a, b, t, rule)?;
    let powers = means.iter().map(|g| g.powf(r)).collect::<Result<Vec<_>>>()?;
    let lhs = singular_values_positive(&sum_positive(&powers)?);

    let sums = Sums::new(a, b)?;
    let [mid, rhs] = if printed_form { sums.printed(r)? } else { sums.weighted(t, r)? };
    let mut chain = Chain::new(
        InequalityId::MainTheorem,
        vec![("sum (A_i#_tB_i)^r".into(), lhs), mid, rhs],
    );
    chain.regularization_epsilon = eps;
    chain.exploratory = r < 1.0;
    Ok(chain)
}

pub fn main_params(m: usize, n: usize, t: f64, r: f64, printed_form: bool, spec: NormSpec) -> Params {
    Params {
        m: Some(m),
        t: Some(t),
        r: Some(r),
        printed_form: Some(printed_form),
        ..Params::new(n, spec)
    }
}

pub fn check_main_theorem(
    a: &[Positive],
    b: &[Positive],
    t: f64,
    r: f64,
    spec: NormSpec,
    printed_form: bool,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let chain = main_theorem_terms(a, b, t, r, printed_form, MeanRule::Exact)?;
    chain.report(main_params(a.len(), a[0].dim(), t, r, printed_form, spec), spec, tol)
}

/// The two halves of the proof refinement
/// `Σ(Aᵢ♯_tBᵢ)^r ≤ (ΣAᵢ♯_tBᵢ)^r ≤ ((ΣA)♯_t(ΣB))^r ≤ mid ≤ rhs`:
/// `step11` holds the first three terms, `step22` the last three (sharing
/// `((ΣA)♯_t(ΣB))^r`).
#[derive(Clone, Debug, PartialEq)]
pub struct ProofSteps<T> {
    pub step11: T,
    pub step22: T,
}

impl ProofSteps<InequalityReport> {
    /// All four margins in chain order.
    pub fn margins(&self) -> Vec<f64> {
        self.step11.margins.iter().chain(&self.step22.margins).copied().collect()
    }
}

pub fn proof_step_terms(a: &[Positive], b: &[Positive], t: f64, r: f64, rule: MeanRule) -> Result<ProofSteps<Chain>> {
    check_main_inputs(a, b, t, r)?;
    let (means, eps_pairs) = pairwise_means(a, b, t, rule)?;
    let powers = means.iter().map(|g| g.powf(r)).collect::<Result<Vec<_>>>()?;
    let first = singular_values_positive(&sum_positive(&powers)?);
    let second = singular_values_positive(&sum_positive(&means)?.powf(r)?);

    let sums = Sums::new(a, b)?;
    let (mean_of_sums, eps_sums) = rule.mean(&sums.a, &sums.b, t)?;
    let third = singular_values_positive(&mean_of_sums.powf(r)?);
    let [mid, rhs] = sums.printed(r)?;

    let eps = match (eps_pairs, eps_sums) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    };
    let third_label = "((sum A)#_t(sum B))^r".to_string();
    let mut step11 = Chain::new(
        InequalityId::ProofStep11,
        vec![
            ("sum (A_i#_tB_i)^r".into(), first),
            ("(sum A_i#_tB_i)^r".into(), second),
            (third_label.clone(), third.clone()),
        ],
    );
    let mut step22 = Chain::new(InequalityId::ProofStep22, vec![(third_label, third), mid, rhs]);
    for chain in [&mut step11, &mut step22] {
        chain.regularization_epsilon = eps;
        chain.exploratory = r < 1.0;
    }
    Ok(ProofSteps { step11, step22 })
}

pub fn check_proof_steps(
    a: &[Positive],
    b: &[Positive],
    t: f64,
    r: f64,
    spec: NormSpec,
    tol: Tolerance,
) -> Result<ProofSteps<InequalityReport>> {
    let chains = proof_step_terms(a, b, t, r, MeanRule::Exact)?;
    let params = main_params(a.len(), a[0].dim(), t, r, true, spec);
    Ok(ProofSteps {
        step11: chains.step11.report(params.clone(), spec, tol)?,
        step22: chains.step22.report(params, spec, tol)?,
    })
}

/// `|||ΣAᵢBᵢ||| ≤ |||(ΣAᵢ^{1/2}Bᵢ^{1/2})²||| ≤ |||(ΣAᵢ)(ΣBᵢ)|||` for
/// commuting pairs. Non-commuting input is an error.
pub fn audenaert_terms(a: &[Positive], b: &[Positive]) -> Result<Chain> {
    check_lists(a, b)?;
    let n = a[0].dim();
    let mut products = Matrix::zeros(n);
    let mut roots = Matrix::zeros(n);
    for (ai, bi) in a.iter().zip(b) {
        let commutator = ai.matrix().commutator_norm(bi.matrix())?;
        let tolerance = COMMUTATOR_TOL * (1.0 + ai.matrix().frobenius_norm() * bi.matrix().frobenius_norm());
        if commutator > tolerance {
            return Err(Error::NotCommuting {
                commutator,
                tolerance,
            });
        }
        products = products.add(&ai.matrix().matmul(bi.matrix())?)?;
        roots = roots.add(&ai.powf(0.5)?.matrix().matmul(bi.powf(0.5)?.matrix())?)?;
    }
    let sums = Sums::new(a, b)?;
    let rhs = sums.a.matrix().matmul(sums.b.matrix())?;
    Ok(Chain::new(
        InequalityId::Audenaert,
        vec![
            ("sum A_iB_i".into(), singular_values(&products)?),
            ("(sum A_i^(1/2)B_i^(1/2))^2".into(), singular_values(&roots.matmul(&roots)?)?),
            ("(sum A)(sum B)".into(), singular_values(&rhs)?),
        ],
    ))
}

pub fn check_audenaert(a: &[Positive], b: &[Positive], spec: NormSpec, tol: Tolerance) -> Result<InequalityReport> {
    let chain = audenaert_terms(a, b)?;
    let params = Params {
        m: Some(a.len()),
        ..Params::new(a[0].dim(), spec)
    };
    chain.report(params, spec, tol)
}
