//! Campaign configuration, read from JSON with the field names below.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tsharp_core::ensembles::{EnsembleKind, EnsembleSpec, Field, DEFAULT_CONDITION};
use tsharp_core::inequalities::{Direction, FunctionId, InequalityId, Tolerance};
use tsharp_core::means::{MeanRule, DEFAULT_EPS_SCALE};
use tsharp_core::norms::NormSpec;

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown output format {other:?} (json|csv)")),
        }
    }
}

/// Ensemble kind without the dimension: rank-deficient draws are given by
/// how many eigenvalues vanish, so one template serves every `n` in `dims`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateKind {
    Pd,
    PsdRankDeficient { deficiency: usize },
    CommutingPair,
}

/// `EnsembleSpec` minus `dim` and `seed`, which the campaign supplies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleTemplate {
    pub kind: TemplateKind,
    #[serde(default = "default_condition")]
    pub condition_target: f64,
    #[serde(default = "default_field")]
    pub field: Field,
}

fn default_condition() -> f64 {
    DEFAULT_CONDITION
}

fn default_field() -> Field {
    Field::Complex
}

impl EnsembleTemplate {
    pub fn pd() -> Self {
        Self {
            kind: TemplateKind::Pd,
            condition_target: DEFAULT_CONDITION,
            field: Field::Complex,
        }
    }

    pub fn spec(&self, dim: usize, seed: u64) -> EnsembleSpec {
        let kind = match self.kind {
            TemplateKind::Pd => EnsembleKind::Pd,
            TemplateKind::PsdRankDeficient { deficiency } => EnsembleKind::PsdRankDeficient {
                rank: dim.saturating_sub(deficiency),
            },
            TemplateKind::CommutingPair => EnsembleKind::CommutingPair,
        };
        EnsembleSpec {
            dim,
            kind,
            condition_target: self.condition_target,
            field: self.field,
            seed,
        }
    }
}

/// One registered function with the direction it is tested in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionEntry {
    pub function: FunctionId,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub inequality_id: InequalityId,
    pub trials: u64,
    pub dims: Vec<usize>,
    #[serde(default = "one")]
    pub m_values: Vec<usize>,
    #[serde(default = "default_t")]
    pub t_grid: Vec<f64>,
    #[serde(default = "default_r")]
    pub r_grid: Vec<f64>,
    #[serde(default = "default_s")]
    pub s_grid: Vec<f64>,
    /// Empty means the default set (Schatten 1, 1.5, 2, 3, ∞ and every Ky
    /// Fan norm) for each dimension.
    #[serde(default)]
    pub norm_specs: Vec<NormSpec>,
    #[serde(default = "EnsembleTemplate::pd")]
    pub ensemble: EnsembleTemplate,
    #[serde(default)]
    pub root_seed: u64,
    #[serde(default = "default_rel")]
    pub rel_tol: f64,
    #[serde(default = "default_abs")]
    pub abs_tol: f64,
    #[serde(default = "yes")]
    pub printed_form: bool,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub output_format: OutputFormat,
    /// Functions for the convex/concave sum inequality; defaults to the
    /// registered family.
    #[serde(default = "default_functions")]
    pub functions: Vec<FunctionEntry>,
    /// Regularization scale for semidefinite inputs. `None` uses the exact
    /// mean for positive definite ensembles and `1e-10` otherwise.
    #[serde(default)]
    pub eps_scale: Option<f64>,
}

fn one() -> Vec<usize> {
    vec![1]
}

fn yes() -> bool {
    true
}

fn default_t() -> Vec<f64> {
    vec![0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0]
}

fn default_r() -> Vec<f64> {
    vec![0.5, 1.0, 1.5, 2.0, 3.0]
}

fn default_s() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

fn default_rel() -> f64 {
    Tolerance::default().rel
}

fn default_abs() -> f64 {
    Tolerance::default().abs
}

fn default_functions() -> Vec<FunctionEntry> {
    FunctionId::registered_family()
        .into_iter()
        .map(|(function, direction)| FunctionEntry { function, direction })
        .collect()
}

impl CampaignConfig {
    /// Defaults from the documented grids for `inequality_id`.
    pub fn new(inequality_id: InequalityId) -> Self {
        let ensemble = match inequality_id {
            InequalityId::Audenaert => EnsembleTemplate {
                kind: TemplateKind::CommutingPair,
                ..EnsembleTemplate::pd()
            },
            _ => EnsembleTemplate::pd(),
        };
        Self {
            inequality_id,
            trials: 100,
            dims: vec![2, 4],
            m_values: match inequality_id {
                InequalityId::LemmaChain => vec![1],
                _ => vec![1, 2, 3],
            },
            t_grid: default_t(),
            r_grid: default_r(),
            s_grid: default_s(),
            norm_specs: Vec::new(),
            ensemble,
            root_seed: 0,
            rel_tol: default_rel(),
            abs_tol: default_abs(),
            printed_form: true,
            output_path: None,
            output_format: OutputFormat::Json,
            functions: default_functions(),
            eps_scale: None,
        }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| HarnessError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol,
            abs: self.abs_tol,
        }
    }

    pub fn mean_rule(&self) -> MeanRule {
        match (self.eps_scale, self.ensemble.kind) {
            (Some(eps_scale), _) => MeanRule::Regularized { eps_scale },
            (None, TemplateKind::PsdRankDeficient { .. }) => MeanRule::Regularized {
                eps_scale: DEFAULT_EPS_SCALE,
            },
            (None, _) => MeanRule::Exact,
        }
    }

    /// The norm specs evaluated at dimension `n`.
    pub fn specs_for(&self, n: usize) -> Vec<NormSpec> {
        if self.norm_specs.is_empty() {
            NormSpec::default_set(n)
        } else {
            self.norm_specs.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        use HarnessError as E;
        if self.trials < 1 {
            return Err(E::config("trials", "must be at least 1"));
        }
        nonempty("dims", &self.dims)?;
        if self.dims.contains(&0) {
            return Err(E::config("dims", "dimensions must be at least 1"));
        }
        nonempty("m_values", &self.m_values)?;
        if self.m_values.contains(&0) {
            return Err(E::config("m_values", "m must be at least 1"));
        }
        nonempty("t_grid", &self.t_grid)?;
        if let Some(t) = self.t_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(E::config("t_grid", format!("t = {t} outside [0, 1]")));
        }
        nonempty("r_grid", &self.r_grid)?;
        positive_entries("r_grid", &self.r_grid)?;
        nonempty("s_grid", &self.s_grid)?;
        positive_entries("s_grid", &self.s_grid)?;
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(E::config("rel_tol", "must be positive"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(E::config("abs_tol", "must be positive"));
        }
        if let Some(eps) = self.eps_scale {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(E::config("eps_scale", "must be positive"));
            }
        }
        for &n in &self.dims {
            for spec in &self.norm_specs {
                spec.validate(n)
                    .map_err(|e| E::config("norm_specs", format!("{spec} at n = {n}: {e}")))?;
            }
            self.ensemble
                .spec(n, 0)
                .validate()
                .map_err(|e| E::config("ensemble", format!("at n = {n}: {e}")))?;
            if let TemplateKind::PsdRankDeficient { deficiency } = self.ensemble.kind {
                if deficiency == 0 || deficiency > n {
                    return Err(E::config("ensemble", format!("deficiency {deficiency} invalid at n = {n}")));
                }
            }
        }
        match (self.inequality_id, self.ensemble.kind) {
            (InequalityId::Audenaert, TemplateKind::CommutingPair) => {}
            (InequalityId::Audenaert, _) => {
                return Err(E::config("ensemble", "Audenaert campaigns need commuting_pair inputs"));
            }
            (InequalityId::LemmaChain, TemplateKind::PsdRankDeficient { .. }) => {
                return Err(E::config("ensemble", "the four-term chain needs positive definite inputs"));
            }
            _ => {}
        }
        if self.inequality_id == InequalityId::BourinUchiyama {
            nonempty("functions", &self.functions)?;
            for entry in &self.functions {
                if !entry.function.is_registered_as(entry.direction) {
                    return Err(E::config(
                        "functions",
                        format!("{} is not registered as {}", entry.function, entry.direction.as_str()),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn nonempty<T>(field: &'static str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        return Err(HarnessError::config(field, "must not be empty"));
    }
    Ok(())
}

fn positive_entries(field: &'static str, v: &[f64]) -> Result<()> {
    if let Some(x) = v.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(HarnessError::config(field, format!("{x} is not positive")));
    }
    Ok(())
}
