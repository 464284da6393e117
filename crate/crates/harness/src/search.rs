//! Random-restart hill descent over input matrices, minimizing the smallest
//! relative margin of one inequality at fixed parameters.
//!
//! A move adds `δ·‖X‖_F·H/‖H‖_F` to one input `X`, with `H` a random
//! Hermitian draw. Moves that lower the objective are accepted; otherwise
//! (including moves that leave the positive definite cone) `δ` is halved.
//! After [`STALL_LIMIT`] consecutive rejections the search restarts from a
//! fresh draw with `δ` reset.

use serde::{Deserialize, Serialize};
use tsharp_core::ensembles::{random_hermitian, split_seed, SplitMix64};
use tsharp_core::inequalities::{InequalityId, InequalityReport, Tolerance, Verdict};
use tsharp_core::means::MeanRule;
use tsharp_core::norms::NormSpec;
use tsharp_core::{Hermitian, Matrix, Positive};

use crate::campaign::{draw_instance, evaluate, Instance, Point};
use crate::config::{CampaignConfig, EnsembleTemplate, TemplateKind};
use crate::error::{HarnessError, Result};

pub const INITIAL_STEP: f64 = 0.05;
pub const STALL_LIMIT: u32 = 50;

/// What is searched: an inequality at fixed parameters and dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchTarget {
    pub inequality_id: InequalityId,
    pub n: usize,
    pub m: usize,
    pub point: Point,
    pub norm_spec: NormSpec,
    /// Keep `B = A` throughout (the equality case of the two-matrix chain).
    #[serde(default)]
    pub equal_inputs: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub target: SearchTarget,
    pub steps: u64,
    pub seed: u64,
    pub ensemble: EnsembleTemplate,
    pub tolerance: Tolerance,
}

impl SearchConfig {
    /// Search settings inheriting seed, ensemble and tolerances from a
    /// campaign config.
    pub fn from_campaign(campaign: &CampaignConfig, target: SearchTarget, steps: u64) -> Self {
        Self {
            target,
            steps,
            seed: campaign.root_seed,
            ensemble: campaign.ensemble,
            tolerance: campaign.tolerance(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.target.n == 0 {
            return Err(HarnessError::config("dim", "must be at least 1"));
        }
        if self.target.m == 0 {
            return Err(HarnessError::config("m_values", "m must be at least 1"));
        }
        self.target
            .norm_spec
            .validate(self.target.n)
            .map_err(|e| HarnessError::config("norm_specs", e.to_string()))?;
        if matches!(self.ensemble.kind, TemplateKind::PsdRankDeficient { .. }) {
            return Err(HarnessError::config("ensemble", "search perturbs strictly positive definite inputs"));
        }
        Ok(())
    }
}

/// Input matrices exactly as evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SerializedInstance {
    pub a: Vec<Matrix>,
    pub b: Vec<Matrix>,
}

impl SerializedInstance {
    fn of(instance: &Instance) -> Self {
        Self {
            a: instance.a.iter().map(|p| p.matrix().clone()).collect(),
            b: instance.b.iter().map(|p| p.matrix().clone()).collect(),
        }
    }

    /// Rebuilds the positive definite inputs; the same path the search uses
    /// for every candidate, so evaluation is bit-reproducible.
    pub fn instance(&self) -> Result<Instance> {
        Ok(Instance {
            a: self.a.iter().map(rebuild).collect::<Result<_>>()?,
            b: self.b.iter().map(rebuild).collect::<Result<_>>()?,
        })
    }
}

fn rebuild(m: &Matrix) -> Result<Positive> {
    Ok(Positive::strict(Hermitian::new(m.clone())?)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub target: SearchTarget,
    pub seed: u64,
    pub steps: u64,
    pub restarts: u64,
    pub accepted_moves: u64,
    /// Whether the best instance falls below the tolerance band.
    pub violation_found: bool,
    pub verdict: Verdict,
    /// Smallest margin of the best instance (absolute).
    pub min_margin: f64,
    /// The objective: `min_margin / scale`.
    pub min_relative_margin: f64,
    pub report: InequalityReport,
    pub instance: SerializedInstance,
}

impl SearchReport {
    /// Re-evaluates the serialized instance.
    pub fn reevaluate(&self) -> Result<InequalityReport> {
        let instance = self.instance.instance()?;
        evaluate_target(&self.target, &instance, self.report.tolerance)
    }
}

fn evaluate_target(target: &SearchTarget, instance: &Instance, tol: Tolerance) -> Result<InequalityReport> {
    evaluate(target.inequality_id, instance, &target.point, target.norm_spec, tol, MeanRule::Exact)
}

struct State {
    instance: Instance,
    report: InequalityReport,
    objective: f64,
}

fn rebuild_instance(instance: Instance, equal: bool) -> Result<Instance> {
    let mut out = SerializedInstance::of(&instance).instance()?;
    if equal {
        out.b = out.a.clone();
    }
    Ok(out)
}

pub fn search_counterexample(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let target = &config.target;
    let campaign_like = CampaignConfig {
        ensemble: config.ensemble,
        ..CampaignConfig::new(target.inequality_id)
    };
    let fresh = |restart: u64| -> Result<State> {
        let seed = split_seed(config.seed, restart);
        let drawn = draw_instance(&campaign_like, seed, target.n, target.m)?;
        let instance = rebuild_instance(drawn, target.equal_inputs)?;
        let report = evaluate_target(target, &instance, config.tolerance)?;
        Ok(State {
            objective: report.min_relative_margin(),
            instance,
            report,
        })
    };

    let mut rng = SplitMix64::new(split_seed(config.seed, u64::MAX));
    let mut restarts = 0;
    let mut current = fresh(restarts)?;
    let mut best = (current.instance.clone(), current.report.clone(), current.objective);
    let mut step = INITIAL_STEP;
    let mut stalls = 0;
    let mut accepted = 0;

    for _ in 0..config.steps {
        if stalls >= STALL_LIMIT {
            restarts += 1;
            current = fresh(restarts)?;
            step = INITIAL_STEP;
            stalls = 0;
        } else {
            match propose(&current.instance, target, step, &mut rng)
                .and_then(|inst| evaluate_target(target, &inst, config.tolerance).map(|r| (inst, r)))
            {
                Ok((instance, report)) if report.min_relative_margin() < current.objective => {
                    current = State {
                        objective: report.min_relative_margin(),
                        instance,
                        report,
                    };
                    accepted += 1;
                    stalls = 0;
                }
                _ => {
                    step *= 0.5;
                    stalls += 1;
                }
            }
        }
        if current.objective < best.2 {
            best = (current.instance.clone(), current.report.clone(), current.objective);
        }
    }

    let (instance, report, objective) = best;
    Ok(SearchReport {
        target: target.clone(),
        seed: config.seed,
        steps: config.steps,
        restarts,
        accepted_moves: accepted,
        violation_found: !report.holds,
        verdict: report.verdict(),
        min_margin: report.min_margin(),
        min_relative_margin: objective,
        instance: SerializedInstance::of(&instance),
        report,
    })
}

/// Perturbs one input matrix (both lists share it when `equal_inputs`).
fn propose(instance: &Instance, target: &SearchTarget, step: f64, rng: &mut SplitMix64) -> Result<Instance> {
    let uses_b = !target.equal_inputs && target.inequality_id != InequalityId::BourinUchiyama;
    let count = instance.a.len() + if uses_b { instance.b.len() } else { 0 };
    let pick = rng.below(count as u64) as usize;
    let field = if instance.a[0].matrix().is_real() {
        tsharp_core::ensembles::Field::Real
    } else {
        tsharp_core::ensembles::Field::Complex
    };
    let direction = random_hermitian(target.n, field, rng.next_u64());
    let unit = direction.matrix().scale(1.0 / direction.matrix().frobenius_norm());

    let mut next = instance.clone();
    let slot = if pick < next.a.len() {
        &mut next.a[pick]
    } else {
        &mut next.b[pick - instance.a.len()]
    };
    let x = slot.matrix();
    let moved = x.add(&unit.scale(step * x.frobenius_norm()))?;
    *slot = rebuild(&moved)?;
    if target.equal_inputs {
        next.b = next.a.clone();
    }
    Ok(next)
}
