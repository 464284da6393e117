//! Report streams: line-delimited JSON (one `InequalityReport` per line) or
//! CSV with the fixed header [`CSV_HEADER`].
//!
//! CSV columns: chain terms fill `term_1..term_4` and margins
//! `margin_1..margin_3` left to right; unused cells and parameters that do
//! not apply are empty. Floats use the shortest round-trip decimal form.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use tsharp_core::inequalities::{InequalityReport, Verdict};

use crate::config::OutputFormat;
use crate::error::{HarnessError, Result};

pub const MAX_TERMS: usize = 4;

pub const CSV_HEADER: [&str; 26] = [
    "inequality_id",
    "trial",
    "point",
    "seed",
    "m",
    "n",
    "t",
    "r",
    "s",
    "norm_spec",
    "function_id",
    "direction",
    "printed_form",
    "regularization_epsilon",
    "exploratory",
    "term_1",
    "term_2",
    "term_3",
    "term_4",
    "margin_1",
    "margin_2",
    "margin_3",
    "min_margin",
    "scale",
    "holds",
    "verdict",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::NumericalTie => "numerical_tie",
        Verdict::Violated => "violated",
    }
}

pub fn csv_row(r: &InequalityReport) -> Vec<String> {
    let p = &r.params;
    let mut row = vec![
        r.inequality_id.to_string(),
        opt(p.trial),
        opt(p.point),
        opt(p.seed),
        opt(p.m),
        p.n.to_string(),
        opt(p.t),
        opt(p.r),
        opt(p.s),
        p.norm_spec.to_string(),
        opt(p.function_id),
        opt(p.direction.map(|d| d.as_str())),
        opt(p.printed_form),
        opt(r.regularization_epsilon),
        r.exploratory.to_string(),
    ];
    for i in 0..MAX_TERMS {
        row.push(opt(r.terms.get(i).map(|t| t.value)));
    }
    for i in 0..MAX_TERMS - 1 {
        row.push(opt(r.margins.get(i)));
    }
    row.push(r.min_margin().to_string());
    row.push(r.scale.to_string());
    row.push(r.holds.to_string());
    row.push(verdict_str(r.verdict()).to_string());
    row
}

enum Sink<W: Write> {
    Json(W),
    Csv(csv::Writer<W>),
}

/// Incremental writer; the CSV header is written on construction so an
/// empty stream still yields a valid file.
pub struct ReportWriter<W: Write> {
    sink: Sink<W>,
}

impl<W: Write> ReportWriter<W> {
    pub fn new(inner: W, format: OutputFormat) -> Result<Self> {
        let sink = match format {
            OutputFormat::Json => Sink::Json(inner),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(inner);
                w.write_record(CSV_HEADER)?;
                Sink::Csv(w)
            }
        };
        Ok(Self { sink })
    }

    pub fn write(&mut self, report: &InequalityReport) -> Result<()> {
        match &mut self.sink {
            Sink::Json(w) => {
                serde_json::to_writer(&mut *w, report)?;
                w.write_all(b"\n")?;
            }
            Sink::Csv(w) => w.write_record(csv_row(report))?,
        }
        Ok(())
    }

    pub fn finish(self) -> Result<W> {
        match self.sink {
            Sink::Json(mut w) => {
                w.flush()?;
                Ok(w)
            }
            Sink::Csv(w) => w.into_inner().map_err(|e| HarnessError::Write(e.into_error())),
        }
    }
}

/// Writes a whole stream to `out`.
pub fn emit_report<'a, W: Write>(
    reports: impl IntoIterator<Item = &'a InequalityReport>,
    format: OutputFormat,
    out: W,
) -> Result<W> {
    let mut w = ReportWriter::new(out, format)?;
    for r in reports {
        w.write(r)?;
    }
    w.finish()
}

pub fn create_output(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| HarnessError::io(path, e))
}

/// Writes a whole stream to the file at `path`.
pub fn emit_to_path<'a>(
    reports: impl IntoIterator<Item = &'a InequalityReport>,
    format: OutputFormat,
    path: &Path,
) -> Result<()> {
    let file = create_output(path)?;
    emit_report(reports, format, file).map_err(|e| match e {
        HarnessError::Write(source) => HarnessError::io(path, source),
        other => other,
    })?;
    Ok(())
}

/// Parses a line-delimited JSON stream back into reports.
pub fn read_json_stream(text: &str) -> Result<Vec<InequalityReport>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(HarnessError::from))
        .collect()
}
