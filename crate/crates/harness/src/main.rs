use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tsharp_core::inequalities::{Direction, FunctionId, InequalityId, InequalityReport, Tolerance};
use tsharp_core::linalg::matrix_from_json;
use tsharp_core::means::{MeanRule, DEFAULT_EPS_SCALE};
use tsharp_core::norms::NormSpec;
use tsharp_core::{Hermitian, Positive};
use tsharp_harness::campaign::{evaluate, run_campaign, Instance, Point};
use tsharp_harness::config::{CampaignConfig, FunctionEntry, OutputFormat};
use tsharp_harness::emit::{create_output, ReportWriter};
use tsharp_harness::search::{search_counterexample, SearchConfig, SearchTarget};
use tsharp_harness::{HarnessError, Result};

/// Seeded numerical checks of weighted geometric mean norm inequalities.
///
/// Exit status: 0 when nothing was violated, 2 when a violation was found,
/// 1 on error.
#[derive(Parser)]
#[command(name = "tsharp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a campaign and stream one report per line (JSON) or row (CSV).
    Campaign(CampaignArgs),
    /// Hill-descent search for a violating instance.
    Search(SearchArgs),
    /// Evaluate one inequality on matrices read from JSON files.
    Eval(EvalArgs),
}

#[derive(Args)]
struct Common {
    /// Relative tolerance of the violation band.
    #[arg(long)]
    tolerance_rel: Option<f64>,
    /// Absolute tolerance of the violation band.
    #[arg(long)]
    tolerance_abs: Option<f64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CampaignArgs {
    /// JSON campaign config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inequality to run when no config is given.
    #[arg(long)]
    inequality: Option<InequalityId>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Dimensions (repeatable).
    #[arg(long = "dim")]
    dims: Vec<usize>,
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Use the printed middle term (`true`) or the weighted variant.
    #[arg(long)]
    printed_form: Option<bool>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    inequality: InequalityId,
    #[arg(long = "dim", default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, default_value = "kyfan:1")]
    norm: NormSpec,
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = true)]
    printed_form: bool,
    /// Hold `B = A` throughout.
    #[arg(long)]
    equal_inputs: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    inequality: InequalityId,
    /// Matrix JSON file for an `A` input (repeatable).
    #[arg(long = "a", required = true)]
    a: Vec<PathBuf>,
    /// Matrix JSON file for a `B` input (repeatable).
    #[arg(long = "b")]
    b: Vec<PathBuf>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    function: Option<FunctionId>,
    #[arg(long)]
    direction: Option<String>,
    /// Norm; every default norm when absent.
    #[arg(long)]
    norm: Option<NormSpec>,
    #[arg(long, default_value_t = true)]
    printed_form: bool,
    #[command(flatten)]
    common: Common,
}

fn tolerance(common: &Common, base: Tolerance) -> Tolerance {
    Tolerance {
        rel: common.tolerance_rel.unwrap_or(base.rel),
        abs: common.tolerance_abs.unwrap_or(base.abs),
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create_output(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn campaign(args: CampaignArgs) -> Result<bool> {
    let mut config = match (&args.config, args.inequality) {
        (Some(path), _) => CampaignConfig::load(path)?,
        (None, Some(id)) => CampaignConfig::new(id),
        (None, None) => return Err(HarnessError::config("inequality_id", "pass --config or --inequality")),
    };
    if let Some(id) = args.inequality {
        config.inequality_id = id;
    }
    if let Some(seed) = args.seed {
        config.root_seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if !args.dims.is_empty() {
        config.dims = args.dims;
    }
    if let Some(format) = args.format {
        config.output_format = format;
    }
    if let Some(p) = args.printed_form {
        config.printed_form = p;
    }
    if args.common.out.is_some() {
        config.output_path = args.common.out.clone();
    }
    let tol = tolerance(&args.common, config.tolerance());
    config.rel_tol = tol.rel;
    config.abs_tol = tol.abs;
    config.validate()?;

    let mut writer = ReportWriter::new(output(&config.output_path)?, config.output_format)?;
    let summary = run_campaign(&config, |r| writer.write(r))?;
    writer.finish()?.flush()?;
    eprintln!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(summary.violated > 0)
}

fn search(args: SearchArgs) -> Result<bool> {
    let target = SearchTarget {
        inequality_id: args.inequality,
        n: args.n,
        m: args.m,
        point: Point {
            t: args.t,
            r: args.r,
            s: args.s,
            function: None,
            printed_form: args.printed_form,
        },
        norm_spec: args.norm,
        equal_inputs: args.equal_inputs,
    };
    let mut base = CampaignConfig::new(args.inequality);
    base.root_seed = args.seed;
    let mut config = SearchConfig::from_campaign(&base, target, args.steps);
    config.tolerance = tolerance(&args.common, config.tolerance);
    let report = search_counterexample(&config)?;
    let mut out = output(&args.common.out)?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    Ok(report.violation_found)
}

fn read_inputs(paths: &[PathBuf]) -> Result<Vec<Positive>> {
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| HarnessError::io(p, e))?;
            let m = matrix_from_json(&text)?;
            Ok(Positive::psd(Hermitian::new(m)?)?)
        })
        .collect()
}

fn eval(args: EvalArgs) -> Result<bool> {
    let a = read_inputs(&args.a)?;
    let b = read_inputs(&args.b)?;
    let rule = if a.iter().chain(&b).all(Positive::is_strict) {
        MeanRule::Exact
    } else {
        MeanRule::Regularized {
            eps_scale: DEFAULT_EPS_SCALE,
        }
    };
    let function = match args.function {
        Some(function) => {
            let direction = match args.direction.as_deref() {
                None => function.natural_direction(),
                Some("convex") => Direction::Convex,
                Some("concave") => Direction::Concave,
                Some(other) => return Err(HarnessError::config("direction", format!("unknown direction {other:?}"))),
            };
            Some(FunctionEntry { function, direction })
        }
        None => None,
    };
    let point = Point {
        t: args.t,
        r: args.r,
        s: args.s,
        function,
        printed_form: args.printed_form,
    };
    let instance = Instance { a, b };
    let n = instance.dim();
    let specs = match args.norm {
        Some(spec) => vec![spec],
        None => NormSpec::default_set(n),
    };
    let tol = tolerance(&args.common, Tolerance::default());
    let reports: Vec<InequalityReport> = specs
        .into_iter()
        .map(|spec| evaluate(args.inequality, &instance, &point, spec, tol, rule))
        .collect::<Result<_>>()?;
    let mut writer = ReportWriter::new(output(&args.common.out)?, OutputFormat::Json)?;
    for r in &reports {
        writer.write(r)?;
    }
    writer.finish()?.flush()?;
    Ok(reports.iter().any(|r| !r.holds))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Campaign(args) => campaign(args),
        Command::Search(args) => search(args),
        Command::Eval(args) => eval(args),
    };
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
