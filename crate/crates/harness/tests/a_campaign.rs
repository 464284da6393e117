use std::process::Command;

use tsharp_core::inequalities::{InequalityId, InequalityReport, Verdict};
use tsharp_core::linalg::matrix_to_json;
use tsharp_harness::campaign::{report_count, Point};
use tsharp_harness::config::{CampaignConfig, EnsembleTemplate, OutputFormat};
use tsharp_harness::emit::{emit_report, emit_to_path, read_json_stream, CSV_HEADER};
use tsharp_harness::search::{search_counterexample, SearchConfig, SearchTarget};
use tsharp_harness::{collect_campaign, run_campaign, CampaignSummary, HarnessError};

fn main_config(trials: u64) -> CampaignConfig {
    CampaignConfig {
        trials,
        dims: vec![2, 3],
        m_values: vec![1, 2],
        t_grid: vec![0.25, 0.5],
        r_grid: vec![1.0, 2.0],
        root_seed: 77,
        ..CampaignConfig::new(InequalityId::MainTheorem)
    }
}

fn json_bytes(reports: &[InequalityReport]) -> Vec<u8> {
    emit_report(reports, OutputFormat::Json, Vec::new()).unwrap()
}

#[test]
fn zero_trials_rejected() {
    let err = collect_campaign(&main_config(0)).unwrap_err();
    assert!(matches!(err, HarnessError::Config { field: "trials", .. }), "{err}");
}

#[test]
fn invalid_fields_are_named() {
    let mut c = main_config(1);
    c.r_grid.clear();
    assert!(matches!(collect_campaign(&c), Err(HarnessError::Config { field: "r_grid", .. })));
    let mut c = main_config(1);
    c.rel_tol = 0.0;
    assert!(matches!(collect_campaign(&c), Err(HarnessError::Config { .. })));
}

#[test]
fn stream_length_matches_grid() {
    let c = main_config(5);
    let (summary, reports) = collect_campaign(&c).unwrap();
    assert_eq!(reports.len() as u64, report_count(&c));
    assert_eq!(summary.total, report_count(&c));
    // 5 trials × (n=2: 2 m × 4 points × 7 norms + n=3: 2 m × 4 points × 8 norms)
    assert_eq!(summary.total, 5 * (2 * 4 * 7 + 2 * 4 * 8));
}

#[test]
fn identical_across_runs_and_thread_counts() {
    let c = main_config(70);
    let (s1, r1) = collect_campaign(&c).unwrap();
    let (s2, r2) = collect_campaign(&c).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let (s3, r3) = one.install(|| collect_campaign(&c)).unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let (_, r4) = four.install(|| collect_campaign(&c)).unwrap();
    let bytes = json_bytes(&r1);
    assert_eq!(bytes, json_bytes(&r2));
    assert_eq!(bytes, json_bytes(&r3));
    assert_eq!(bytes, json_bytes(&r4));
    let strip = |mut s: CampaignSummary| {
        s.wall_time_secs = 0.0;
        s
    };
    assert_eq!(strip(s1.clone()), strip(s2));
    assert_eq!(strip(s1), strip(s3));
}

#[test]
fn summary_recomputed_from_stream() {
    let mut c = main_config(20);
    c.t_grid = vec![0.0, 0.5, 0.9];
    let mut buf = Vec::new();
    let summary = run_campaign(&c, |r| {
        buf.push(r.clone());
        Ok(())
    })
    .unwrap();
    let text = String::from_utf8(json_bytes(&buf)).unwrap();
    let parsed = read_json_stream(&text).unwrap();
    assert_eq!(parsed, buf);

    let held = parsed.iter().filter(|r| r.holds).count() as u64;
    let violated = parsed.iter().filter(|r| r.verdict() == Verdict::Violated).count() as u64;
    assert_eq!(summary.held, held);
    assert_eq!(summary.violated, violated);
    assert_eq!(summary.held + summary.violated, summary.total);
    let min = parsed.iter().map(|r| r.min_margin()).fold(f64::INFINITY, f64::min);
    let rec = summary.min_margin.as_ref().unwrap();
    assert_eq!(rec.margin, min);
    assert!(parsed.iter().all(|r| r.margins.iter().all(|&m| m >= rec.margin)));
    let attained = parsed.iter().find(|r| r.min_margin() == min).unwrap();
    assert_eq!(rec.params, attained.params);
}

#[test]
fn empty_stream_is_header_only() {
    let out = emit_report(std::iter::empty(), OutputFormat::Csv, Vec::new()).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text, format!("{}\n", CSV_HEADER.join(",")));
    let json = emit_report(std::iter::empty(), OutputFormat::Json, Vec::new()).unwrap();
    assert!(json.is_empty());
}

#[test]
fn csv_row_count_and_shape() {
    let mut c = main_config(1);
    c.dims = vec![2];
    c.m_values = vec![1];
    c.t_grid = vec![0.5];
    c.r_grid = vec![1.0];
    c.norm_specs = vec!["kyfan:1".parse().unwrap()];
    c.trials = 1000;
    let (_, reports) = collect_campaign(&c).unwrap();
    assert_eq!(reports.len(), 1000);
    let out = emit_report(&reports, OutputFormat::Csv, Vec::new()).unwrap();
    let mut rdr = csv::Reader::from_reader(out.as_slice());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len() + 1, 1001);
    assert!(rows.iter().all(|r| r.len() == CSV_HEADER.len()));
    // Three-term chain: term_4 and margin_3 stay empty.
    let t4 = CSV_HEADER.iter().position(|&h| h == "term_4").unwrap();
    assert!(rows.iter().all(|r| r[t4].is_empty()));
    let m1 = CSV_HEADER.iter().position(|&h| h == "margin_1").unwrap();
    assert_eq!(rows[3][m1].parse::<f64>().unwrap(), reports[3].margins[0]);
}

#[test]
fn one_report_round_trips() {
    let mut c = main_config(1);
    c.dims = vec![2];
    c.m_values = vec![2];
    c.t_grid = vec![0.5];
    c.r_grid = vec![3.0];
    c.norm_specs = vec!["schatten:1.5".parse().unwrap()];
    let (_, reports) = collect_campaign(&c).unwrap();
    assert_eq!(reports.len(), 1);
    let bytes = json_bytes(&reports);
    assert_eq!(bytes.iter().filter(|&&b| b == b'\n').count(), 1);
    assert_eq!(read_json_stream(std::str::from_utf8(&bytes).unwrap()).unwrap(), reports);
}

#[test]
fn unwritable_path_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let err = emit_to_path(std::iter::empty(), OutputFormat::Csv, &path).unwrap_err();
    assert!(err.to_string().contains("out.csv"), "{err}");
}

fn search_target(t: f64, r: f64) -> SearchTarget {
    SearchTarget {
        inequality_id: InequalityId::MainTheorem,
        n: 2,
        m: 2,
        point: Point {
            t: Some(t),
            r: Some(r),
            s: None,
            function: None,
            printed_form: true,
        },
        norm_spec: "kyfan:1".parse().unwrap(),
        equal_inputs: false,
    }
}

fn search_config(target: SearchTarget, steps: u64, seed: u64) -> SearchConfig {
    let mut base = CampaignConfig::new(target.inequality_id);
    base.root_seed = seed;
    base.ensemble = EnsembleTemplate::pd();
    SearchConfig::from_campaign(&base, target, steps)
}

#[test]
fn search_in_theorem_region_finds_nothing() {
    let rep = search_counterexample(&search_config(search_target(0.5, 2.0), 10_000, 3)).unwrap();
    assert!(!rep.violation_found, "{}", rep.min_relative_margin);
    assert_ne!(rep.verdict, Verdict::Violated);
}

#[test]
fn search_soundness() {
    for (t, seed) in [(0.1, 1), (0.9, 2), (0.25, 3)] {
        let rep = search_counterexample(&search_config(search_target(t, 1.0), 500, seed)).unwrap();
        let again = rep.reevaluate().unwrap();
        assert!((again.min_margin() - rep.min_margin).abs() <= 1e-12 * (1.0 + rep.min_margin.abs()));
        assert_eq!(again.holds, rep.report.holds);
        // Through text as well.
        let text = serde_json::to_string(&rep).unwrap();
        let back: tsharp_harness::SearchReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.reevaluate().unwrap().min_margin(), again.min_margin());
    }
}

#[test]
fn search_lemma_equal_inputs() {
    let target = SearchTarget {
        inequality_id: InequalityId::LemmaChain,
        m: 1,
        point: Point {
            s: Some(2.0),
            ..search_target(0.3, 3.0).point
        },
        equal_inputs: true,
        ..search_target(0.3, 3.0)
    };
    let rep = search_counterexample(&search_config(target, 1000, 5)).unwrap();
    assert!(!rep.violation_found);
    assert!(rep.min_margin.abs() <= 1e-12 * rep.report.scale);
}

fn tsharp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tsharp"))
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let ok = tsharp()
        .args(["campaign", "--inequality", "MainTheorem", "--trials", "3", "--dim", "2", "--format", "csv"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    let config = {
        let mut c = CampaignConfig::new(InequalityId::MainTheorem);
        c.t_grid = vec![0.5];
        c.r_grid = vec![1.0, 2.0];
        c.trials = 2;
        let path = dir.path().join("c.json");
        std::fs::write(&path, serde_json::to_string(&c).unwrap()).unwrap();
        path
    };
    let clean = tsharp()
        .args(["campaign", "--seed", "4", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("clean.json"))
        .output()
        .unwrap();
    assert_eq!(clean.status.code(), Some(0), "{}", String::from_utf8_lossy(&clean.stderr));
    // The weight-free middle term ignores t, so t = 0 violates on generic inputs.
    assert_eq!(ok.status.code(), Some(2), "{}", String::from_utf8_lossy(&ok.stderr));
    let rows = std::fs::read_to_string(&out).unwrap().lines().count();
    assert_eq!(rows as u64 - 1, report_count(&CampaignConfig {
        trials: 3,
        dims: vec![2],
        ..CampaignConfig::new(InequalityId::MainTheorem)
    }));

    let bad = tsharp().args(["campaign", "--inequality", "MainTheorem", "--trials", "0"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("trials"));
}

#[test]
fn cli_eval_reads_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = tsharp_core::Matrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
    let b = tsharp_core::Matrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
    let pa = dir.path().join("a.json");
    let pb = dir.path().join("b.json");
    std::fs::write(&pa, matrix_to_json(&a)).unwrap();
    std::fs::write(&pb, matrix_to_json(&b)).unwrap();
    let out = tsharp()
        .args(["eval", "--inequality", "MainTheorem", "--t", "0.5", "--r", "2", "--norm", "trace"])
        .arg("--a")
        .arg(&pa)
        .arg("--b")
        .arg(&pb)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = read_json_stream(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    // Singular B goes through the regularized mean.
    assert!(reports[0].regularization_epsilon.is_some());
}
