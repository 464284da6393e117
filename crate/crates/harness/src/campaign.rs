//! Campaign execution: every trial draws fresh inputs, evaluates the whole
//! parameter grid on them, and the reports are merged in (trial, point)
//! order regardless of how many threads ran.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tsharp_core::ensembles::{random_pair_lists, split_seed};
use tsharp_core::inequalities::{
    audenaert_terms, bourin_uchiyama_terms, lemma_chain_terms, main_theorem_terms, proof_step_terms, Chain,
    InequalityId, InequalityReport, Params, Tolerance, Verdict,
};
use tsharp_core::means::{MeanParams, MeanRule};
use tsharp_core::norms::NormSpec;
use tsharp_core::Positive;

use crate::config::{CampaignConfig, FunctionEntry};
use crate::error::{HarnessError, Result};

/// Trials evaluated concurrently before their reports are flushed in order.
const BATCH: u64 = 64;

/// Input lists of one instance. Single-pair inequalities use `a[0]`,
/// `b[0]`; the sum inequality uses `a` only.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub a: Vec<Positive>,
    pub b: Vec<Positive>,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.a[0].dim()
    }
}

/// Non-matrix parameters of one evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub t: Option<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub function: Option<FunctionEntry>,
    pub printed_form: bool,
}

impl Point {
    fn bare(printed_form: bool) -> Self {
        Self {
            t: None,
            r: None,
            s: None,
            function: None,
            printed_form,
        }
    }
}

fn missing(name: &'static str) -> HarnessError {
    HarnessError::config("point", format!("parameter {name} is required for this inequality"))
}

/// Builds the term chain of `id` on `instance`.
pub fn chain_for(id: InequalityId, instance: &Instance, point: &Point, rule: MeanRule) -> Result<Chain> {
    let t = || point.t.ok_or_else(|| missing("t"));
    let r = || point.r.ok_or_else(|| missing("r"));
    let chain = match id {
        InequalityId::LemmaChain => {
            let s = point.s.ok_or_else(|| missing("s"))?;
            lemma_chain_terms(&instance.a[0], &instance.b[0], MeanParams::new(t()?, r()?, s)?)?
        }
        InequalityId::BourinUchiyama => {
            let f = point.function.ok_or_else(|| missing("function"))?;
            bourin_uchiyama_terms(&instance.a, f.function, f.direction)?
        }
        InequalityId::MainTheorem => {
            main_theorem_terms(&instance.a, &instance.b, t()?, r()?, point.printed_form, rule)?
        }
        InequalityId::ProofStep11 => proof_step_terms(&instance.a, &instance.b, t()?, r()?, rule)?.step11,
        InequalityId::ProofStep22 => proof_step_terms(&instance.a, &instance.b, t()?, r()?, rule)?.step22,
        InequalityId::Audenaert => audenaert_terms(&instance.a, &instance.b)?,
    };
    Ok(chain)
}

/// Report parameters for `id` (fields that do not apply stay `None`).
pub fn params_for(id: InequalityId, instance: &Instance, point: &Point, spec: NormSpec) -> Params {
    let mut p = Params::new(instance.dim(), spec);
    match id {
        InequalityId::LemmaChain => {
            p.t = point.t;
            p.r = point.r;
            p.s = point.s;
        }
        InequalityId::BourinUchiyama => {
            p.m = Some(instance.a.len());
            p.function_id = point.function.map(|f| f.function);
            p.direction = point.function.map(|f| f.direction);
        }
        InequalityId::MainTheorem | InequalityId::ProofStep11 | InequalityId::ProofStep22 => {
            p.m = Some(instance.a.len());
            p.t = point.t;
            p.r = point.r;
            p.printed_form = Some(id != InequalityId::MainTheorem || point.printed_form);
        }
        InequalityId::Audenaert => p.m = Some(instance.a.len()),
    }
    p
}

/// Evaluates one instance at one point for one norm.
pub fn evaluate(
    id: InequalityId,
    instance: &Instance,
    point: &Point,
    spec: NormSpec,
    tol: Tolerance,
    rule: MeanRule,
) -> Result<InequalityReport> {
    let chain = chain_for(id, instance, point, rule)?;
    Ok(chain.report(params_for(id, instance, point, spec), spec, tol)?)
}

/// The grid of non-matrix parameters for `config.inequality_id`; only the
/// axes the inequality uses are expanded.
pub fn grid(config: &CampaignConfig) -> Vec<Point> {
    let base = Point::bare(config.printed_form);
    match config.inequality_id {
        InequalityId::LemmaChain => {
            let mut out = Vec::new();
            for &t in &config.t_grid {
                for &r in &config.r_grid {
                    for &s in &config.s_grid {
                        out.push(Point {
                            t: Some(t),
                            r: Some(r),
                            s: Some(s),
                            ..base
                        });
                    }
                }
            }
            out
        }
        InequalityId::BourinUchiyama => config
            .functions
            .iter()
            .map(|&f| Point {
                function: Some(f),
                ..base
            })
            .collect(),
        InequalityId::MainTheorem | InequalityId::ProofStep11 | InequalityId::ProofStep22 => {
            let mut out = Vec::new();
            for &t in &config.t_grid {
                for &r in &config.r_grid {
                    out.push(Point {
                        t: Some(t),
                        r: Some(r),
                        ..base
                    });
                }
            }
            out
        }
        InequalityId::Audenaert => vec![base],
    }
}

/// List lengths used by `config.inequality_id` (the two-matrix chain has
/// no `m`).
fn m_values(config: &CampaignConfig) -> Vec<usize> {
    match config.inequality_id {
        InequalityId::LemmaChain => vec![1],
        _ => config.m_values.clone(),
    }
}

/// Seed of the inputs for `(trial, n, m)`; shared by every grid point so
/// that parameters are compared on identical matrices.
pub fn instance_seed(root_seed: u64, trial: u64, n: usize, m: usize) -> u64 {
    split_seed(split_seed(split_seed(root_seed, trial), n as u64), m as u64)
}

pub fn draw_instance(config: &CampaignConfig, seed: u64, n: usize, m: usize) -> Result<Instance> {
    let (a, b) = random_pair_lists(&config.ensemble.spec(n, seed), m)?;
    Ok(Instance { a, b })
}

/// Number of reports a valid config produces.
pub fn report_count(config: &CampaignConfig) -> u64 {
    let points = grid(config).len() as u64;
    let mut per_trial = 0;
    for &n in &config.dims {
        per_trial += m_values(config).len() as u64 * points * config.specs_for(n).len() as u64;
    }
    config.trials * per_trial
}

fn run_trial(config: &CampaignConfig, trial: u64, points: &[Point]) -> Result<Vec<InequalityReport>> {
    let tol = config.tolerance();
    let rule = config.mean_rule();
    let id = config.inequality_id;
    let mut out = Vec::new();
    let mut index = 0u64;
    for &n in &config.dims {
        let specs = config.specs_for(n);
        for m in m_values(config) {
            let seed = instance_seed(config.root_seed, trial, n, m);
            let instance = draw_instance(config, seed, n, m)?;
            for point in points {
                let chain = chain_for(id, &instance, point, rule)?;
                for &spec in &specs {
                    let mut params = params_for(id, &instance, point, spec);
                    params.seed = Some(seed);
                    params.trial = Some(trial);
                    params.point = Some(index);
                    index += 1;
                    out.push(chain.report(params, spec, tol)?);
                }
            }
        }
    }
    Ok(out)
}

/// Where the smallest margin of a campaign occurred.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginRecord {
    pub margin: f64,
    pub relative_margin: f64,
    /// Zero-based chain step of the margin.
    pub step: usize,
    pub inequality_id: InequalityId,
    pub params: Params,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub total: u64,
    pub held: u64,
    pub violated: u64,
    /// Held reports whose smallest margin is negative but inside the band.
    pub ties: u64,
    /// Reports outside the stated hypotheses (`r < 1`).
    pub exploratory: u64,
    /// Reports whose consecutive terms fail Ky Fan dominance.
    pub fan_failures: u64,
    /// Smallest absolute margin.
    pub min_margin: Option<MarginRecord>,
    /// Smallest margin relative to its report's scale.
    pub min_relative_margin: Option<MarginRecord>,
    pub wall_time_secs: f64,
}

impl CampaignSummary {
    fn empty() -> Self {
        Self {
            total: 0,
            held: 0,
            violated: 0,
            ties: 0,
            exploratory: 0,
            fan_failures: 0,
            min_margin: None,
            min_relative_margin: None,
            wall_time_secs: 0.0,
        }
    }

    /// Folds one report in; reports must arrive in stream order for the
    /// tie-breaking of the minima to be reproducible.
    pub fn add(&mut self, report: &InequalityReport) {
        self.total += 1;
        if report.holds {
            self.held += 1;
        } else {
            self.violated += 1;
        }
        if report.verdict() == Verdict::NumericalTie {
            self.ties += 1;
        }
        self.exploratory += report.exploratory as u64;
        self.fan_failures += !report.all_norm_dominance() as u64;
        for (step, &margin) in report.margins.iter().enumerate() {
            let relative = if report.scale > 0.0 { margin / report.scale } else { 0.0 };
            let record = || MarginRecord {
                margin,
                relative_margin: relative,
                step,
                inequality_id: report.inequality_id,
                params: report.params.clone(),
            };
            if self.min_margin.as_ref().is_none_or(|m| margin < m.margin) {
                self.min_margin = Some(record());
            }
            if self.min_relative_margin.as_ref().is_none_or(|m| relative < m.relative_margin) {
                self.min_relative_margin = Some(record());
            }
        }
    }

    /// Summary of an already materialized stream (wall time zero).
    pub fn from_reports<'a>(reports: impl IntoIterator<Item = &'a InequalityReport>) -> Self {
        let mut s = Self::empty();
        for r in reports {
            s.add(r);
        }
        s
    }
}

/// Runs the campaign, handing every report to `sink` in (trial, point)
/// order. Trials run in parallel batches on the current rayon pool.
pub fn run_campaign(
    config: &CampaignConfig,
    mut sink: impl FnMut(&InequalityReport) -> Result<()>,
) -> Result<CampaignSummary> {
    config.validate()?;
    let start = Instant::now();
    let points = grid(config);
    let mut summary = CampaignSummary::empty();
    let mut first = 0;
    while first < config.trials {
        let last = (first + BATCH).min(config.trials);
        let batch: Vec<Result<Vec<InequalityReport>>> =
            (first..last).into_par_iter().map(|trial| run_trial(config, trial, &points)).collect();
        for reports in batch {
            for report in reports? {
                summary.add(&report);
                sink(&report)?;
            }
        }
        first = last;
    }
    summary.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(summary)
}

/// [`run_campaign`] collecting the stream in memory.
pub fn collect_campaign(config: &CampaignConfig) -> Result<(CampaignSummary, Vec<InequalityReport>)> {
    let mut reports = Vec::new();
    let summary = run_campaign(config, |r| {
        reports.push(r.clone());
        Ok(())
    })?;
    Ok((summary, reports))
}
