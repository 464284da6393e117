use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::norms::{ui_norm_of, weak_majorization_with, Dominance, NormSpec, SingularValues};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityId {
    Audenaert,
    BourinUchiyama,
    LemmaChain,
    MainTheorem,
    ProofStep11,
    ProofStep22,
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for InequalityId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "Audenaert" => Self::Audenaert,
            "BourinUchiyama" => Self::BourinUchiyama,
            "LemmaChain" => Self::LemmaChain,
            "MainTheorem" => Self::MainTheorem,
            "ProofStep11" => Self::ProofStep11,
            "ProofStep22" => Self::ProofStep22,
            other => return Err(format!("unknown inequality id {other:?}")),
        })
    }
}

/// Tolerance band: a margin counts as a violation only below
/// `−(rel·scale + abs)`, where `scale` is the largest term value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn band(&self, scale: f64) -> f64 {
        self.rel * scale + self.abs
    }
}

/// Whether a chain is asserted as `≤` (convex / default) or `≥` (concave).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Convex,
    Concave,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Convex => "convex",
            Direction::Concave => "concave",
        }
    }
}

/// Scalar functions registered for the convex/concave sum inequality. All
/// vanish at zero and are nonnegative on `[0, ∞)`.
///
/// Text form: `power:<p>`, `expm1`, `ratio` (for `x/(1+x)`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FunctionId {
    Power(f64),
    Expm1,
    Ratio,
}

impl FunctionId {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            FunctionId::Power(p) => {
                if x == 0.0 {
                    0.0
                } else {
                    x.powf(p)
                }
            }
            FunctionId::Expm1 => x.exp_m1(),
            FunctionId::Ratio => x / (1.0 + x),
        }
    }

    pub fn check_registered(&self) -> Result<()> {
        match *self {
            FunctionId::Power(p) if !(p > 0.0 && p.is_finite()) => {
                Err(Error::UnregisteredFunction(self.to_string()))
            }
            _ => Ok(()),
        }
    }

    pub fn is_registered_as(&self, direction: Direction) -> bool {
        match (*self, direction) {
            (FunctionId::Power(p), Direction::Convex) => p >= 1.0,
            (FunctionId::Power(p), Direction::Concave) => p > 0.0 && p <= 1.0,
            (FunctionId::Expm1, Direction::Convex) => true,
            (FunctionId::Ratio, Direction::Concave) => true,
            _ => false,
        }
    }

    /// The direction a campaign uses by default (`power:1` counts as convex).
    pub fn natural_direction(&self) -> Direction {
        if self.is_registered_as(Direction::Convex) {
            Direction::Convex
        } else {
            Direction::Concave
        }
    }

    /// Convex members `power:{1,2,3}`, `expm1`; concave members
    /// `power:{0.5,1}`, `ratio`.
    pub fn registered_family() -> Vec<(FunctionId, Direction)> {
        vec![
            (FunctionId::Power(1.0), Direction::Convex),
            (FunctionId::Power(2.0), Direction::Convex),
            (FunctionId::Power(3.0), Direction::Convex),
            (FunctionId::Expm1, Direction::Convex),
            (FunctionId::Power(0.5), Direction::Concave),
            (FunctionId::Power(1.0), Direction::Concave),
            (FunctionId::Ratio, Direction::Concave),
        ]
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionId::Power(p) => write!(f, "power:{p}"),
            FunctionId::Expm1 => write!(f, "expm1"),
            FunctionId::Ratio => write!(f, "ratio"),
        }
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let f = match s.trim() {
            "expm1" => FunctionId::Expm1,
            "ratio" => FunctionId::Ratio,
            other => match other.split_once(':') {
                Some(("power", p)) => FunctionId::Power(
                    p.parse()
                        .map_err(|_| Error::UnregisteredFunction(s.to_string()))?,
                ),
                _ => return Err(Error::UnregisteredFunction(s.to_string())),
            },
        };
        f.check_registered()?;
        Ok(f)
    }
}

impl Serialize for FunctionId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FunctionId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parameters of one evaluated instance. Fields that do not apply to an
/// inequality are `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub m: Option<usize>,
    pub n: usize,
    pub t: Option<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub norm_spec: NormSpec,
    pub function_id: Option<FunctionId>,
    pub direction: Option<Direction>,
    pub printed_form: Option<bool>,
    pub seed: Option<u64>,
    pub trial: Option<u64>,
    pub point: Option<u64>,
}

impl Params {
    pub fn new(n: usize, norm_spec: NormSpec) -> Self {
        Self {
            m: None,
            n,
            t: None,
            r: None,
            s: None,
            norm_spec,
            function_id: None,
            direction: None,
            printed_form: None,
            seed: None,
            trial: None,
            point: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    /// Negative margin inside the tolerance band.
    NumericalTie,
    Violated,
}

/// One evaluated inequality instance.
///
/// `margins[i]` is the signed slack of step `i` in the asserted direction:
/// `terms[i+1] − terms[i]` for `≤` chains and `terms[i] − terms[i+1]` for
/// `≥` chains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub inequality_id: InequalityId,
    pub params: Params,
    pub terms: Vec<Term>,
    pub margins: Vec<f64>,
    pub holds: bool,
    pub regularization_epsilon: Option<f64>,
    pub scale: f64,
    pub tolerance: Tolerance,
    /// Ky Fan (all-norm) dominance between consecutive terms.
    pub fan_dominance: Vec<Dominance>,
    /// Set when the parameters fall outside the stated hypotheses (r < 1).
    pub exploratory: bool,
}

impl InequalityReport {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Smallest margin divided by `scale` (0 when every term vanishes).
    pub fn min_relative_margin(&self) -> f64 {
        if self.scale > 0.0 {
            self.min_margin() / self.scale
        } else {
            0.0
        }
    }

    pub fn band(&self) -> f64 {
        self.tolerance.band(self.scale)
    }

    pub fn verdict(&self) -> Verdict {
        let m = self.min_margin();
        if m >= 0.0 {
            Verdict::Holds
        } else if m >= -self.band() {
            Verdict::NumericalTie
        } else {
            Verdict::Violated
        }
    }

    pub fn all_norm_dominance(&self) -> bool {
        self.fan_dominance.iter().all(|d| d.holds)
    }

    pub fn term_values(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.value).collect()
    }
}

/// The singular values of every term of a chain, ready to be normed.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub id: InequalityId,
    pub terms: Vec<(String, SingularValues)>,
    pub direction: Direction,
    pub regularization_epsilon: Option<f64>,
    pub exploratory: bool,
}

impl Chain {
    pub(crate) fn new(id: InequalityId, terms: Vec<(String, SingularValues)>) -> Self {
        Self {
            id,
            terms,
            direction: Direction::Convex,
            regularization_epsilon: None,
            exploratory: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.terms.first().map_or(0, |(_, s)| s.len())
    }

    /// Norms every term with `spec` and assembles the report. `params.n`
    /// and `params.norm_spec` are filled in from the chain.
    pub fn report(&self, mut params: Params, spec: NormSpec, tol: Tolerance) -> Result<InequalityReport> {
        params.n = self.dim();
        params.norm_spec = spec;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (label, sv) in &self.terms {
            let value = ui_norm_of(sv, spec)?;
            if !value.is_finite() {
                return Err(Error::NonFiniteTerm {
                    label: label.clone(),
                });
            }
            terms.push(Term {
                label: label.clone(),
                value,
            });
        }
        let descending = self.direction == Direction::Concave;
        let margins: Vec<f64> = terms
            .windows(2)
            .map(|w| {
                if descending {
                    w[0].value - w[1].value
                } else {
                    w[1].value - w[0].value
                }
            })
            .collect();
        let fan_dominance = self
            .terms
            .windows(2)
            .map(|w| {
                let (lo, hi) = if descending { (&w[1].1, &w[0].1) } else { (&w[0].1, &w[1].1) };
                weak_majorization_with(lo, hi, tol.rel)
            })
            .collect::<Result<Vec<_>>>()?;
        let scale = terms.iter().map(|t| t.value).fold(0.0, f64::max);
        let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(InequalityReport {
            inequality_id: self.id,
            params,
            terms,
            margins,
            holds: min_margin >= -tol.band(scale),
            regularization_epsilon: self.regularization_epsilon,
            scale,
            tolerance: tol,
            fan_dominance,
            exploratory: self.exploratory,
        })
    }
}
