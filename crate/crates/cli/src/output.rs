//! CSV and JSON writers. Column order and field names follow `docs/schema.md`.

use std::io::Write;

use robin_ball::{CheckReport, CoincidenceHit, ProblemSpec, RunningQuotient, ScanResult, Spectrum};
use serde::Serialize;

use crate::args::Format;
use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip every double.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub index: u64,
    pub mu: f64,
    pub m: u32,
    pub k: u32,
    pub multiplicity: u64,
    pub kind: &'static str,
    pub residual: f64,
}

/// One row per eigenvalue index, repeating each line `multiplicity` times,
/// cut at `n` rows when given.
pub fn spectrum_rows(s: &Spectrum, n: Option<u64>) -> Vec<SpectrumRow> {
    let mut rows = Vec::new();
    let mut index = 0;
    'outer: for l in &s.lines {
        for _ in 0..l.multiplicity {
            if n.is_some_and(|n| index >= n) {
                break 'outer;
            }
            index += 1;
            rows.push(SpectrumRow {
                index,
                mu: l.mu,
                m: l.mode.m,
                k: l.mode.k,
                multiplicity: l.multiplicity,
                kind: l.kind.as_str(),
                residual: l.residual,
            });
        }
    }
    rows
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    spec: &'a ProblemSpec,
    #[serde(flatten)]
    body: T,
}

fn write_json<T: Serialize>(out: &mut dyn Write, command: &str, spec: &ProblemSpec, body: T) -> Result<()> {
    let env = Envelope { schema: SCHEMA_VERSION, command, spec, body };
    serde_json::to_writer_pretty(&mut *out, &env)?;
    writeln!(out).map_err(|e| CliError::io("<output>", e))?;
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out)
}

fn flush(mut w: csv::Writer<&mut dyn Write>) -> Result<()> {
    w.flush().map_err(|e| CliError::io("<output>", e))
}

pub fn write_spectrum(out: &mut dyn Write, format: Format, spec: &ProblemSpec, rows: &[SpectrumRow]) -> Result<()> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                rows: &'a [SpectrumRow],
            }
            write_json(out, "spectrum", spec, Body { rows })
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["index", "mu", "m", "k", "multiplicity", "kind", "residual"])?;
            for r in rows {
                w.write_record([
                    r.index.to_string(),
                    float(r.mu),
                    r.m.to_string(),
                    r.k.to_string(),
                    r.multiplicity.to_string(),
                    r.kind.to_string(),
                    float(r.residual),
                ])?;
            }
            flush(w)
        }
    }
}

pub fn write_pleijel(
    out: &mut dyn Write,
    format: Format,
    spec: &ProblemSpec,
    scan: &ScanResult,
    series: &[RunningQuotient],
) -> Result<()> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                scan: &'a ScanResult,
                series: &'a [RunningQuotient],
            }
            write_json(out, "pleijel", spec, Body { scan, series })
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["record", "index", "m", "k", "nodal_count", "quotient", "eigenvalue", "running_max"])?;
            let best = &scan.records[0];
            let rec = |w: &mut csv::Writer<&mut dyn Write>, kind: &str, r: &robin_ball::QuotientRecord| {
                w.write_record([
                    kind.to_string(),
                    r.index.to_string(),
                    r.mode.m.to_string(),
                    r.mode.k.to_string(),
                    r.nodal_count.to_string(),
                    float(r.quotient),
                    float(r.eigenvalue),
                    String::new(),
                ])
            };
            rec(&mut w, "supremum", best)?;
            for r in &scan.records {
                rec(&mut w, "top", r)?;
            }
            for q in series {
                w.write_record([
                    "series".to_string(),
                    q.index.to_string(),
                    q.mode.m.to_string(),
                    q.mode.k.to_string(),
                    q.nodal_count.to_string(),
                    float(q.quotient),
                    String::new(),
                    float(q.running_max),
                ])?;
            }
            flush(w)
        }
    }
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

pub fn write_report(out: &mut dyn Write, format: Format, spec: &ProblemSpec, report: &CheckReport) -> Result<()> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                report: &'a CheckReport,
            }
            write_json(out, "verify", spec, Body { report })
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record([
                "record", "check_name", "pass", "checked", "worst_margin", "m", "k", "relation", "lhs", "rhs", "margin",
            ])?;
            w.write_record([
                "summary".to_string(),
                report.check_name.clone(),
                report.pass.to_string(),
                report.checked.to_string(),
                opt_float(report.worst_margin),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ])?;
            for v in &report.violations {
                w.write_record([
                    "violation".to_string(),
                    report.check_name.clone(),
                    String::new(),
                    String::new(),
                    String::new(),
                    v.mode.m.to_string(),
                    v.mode.k.to_string(),
                    v.relation.clone(),
                    float(v.lhs),
                    float(v.rhs),
                    float(v.margin),
                ])?;
            }
            flush(w)
        }
    }
}

pub fn write_coincidences(out: &mut dyn Write, format: Format, spec: &ProblemSpec, hits: &[CoincidenceHit]) -> Result<()> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                hits: &'a [CoincidenceHit],
            }
            write_json(out, "scan-coincidences", spec, Body { hits })
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["sigma", "m_a", "k_a", "m_b", "k_b", "root_a", "root_b", "gap"])?;
            for h in hits {
                w.write_record([
                    h.sigma.clone().unwrap_or_default(),
                    h.mode_a.m.to_string(),
                    h.mode_a.k.to_string(),
                    h.mode_b.m.to_string(),
                    h.mode_b.k.to_string(),
                    float(h.roots.0),
                    float(h.roots.1),
                    float(h.gap),
                ])?;
            }
            flush(w)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CacheInfoRow {
    pub file: String,
    pub format: &'static str,
    pub d: Option<u32>,
    pub boundary: Option<&'static str>,
    pub sigma: Option<String>,
    pub x_max: Option<f64>,
    pub entries: Option<u64>,
    /// `ok`, or why the file would be rejected.
    pub status: String,
}

pub fn write_cache_info(out: &mut dyn Write, format: Format, rows: &[CacheInfoRow]) -> Result<()> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                schema: u32,
                command: &'a str,
                files: &'a [CacheInfoRow],
            }
            serde_json::to_writer_pretty(&mut *out, &Body { schema: SCHEMA_VERSION, command: "cache-info", files: rows })?;
            writeln!(out).map_err(|e| CliError::io("<output>", e))?;
            Ok(())
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["file", "format", "d", "boundary", "sigma", "x_max", "entries", "status"])?;
            for r in rows {
                w.write_record([
                    r.file.clone(),
                    r.format.to_string(),
                    r.d.map(|d| d.to_string()).unwrap_or_default(),
                    r.boundary.unwrap_or_default().to_string(),
                    r.sigma.clone().unwrap_or_default(),
                    opt_float(r.x_max),
                    r.entries.map(|n| n.to_string()).unwrap_or_default(),
                    r.status.clone(),
                ])?;
            }
            flush(w)
        }
    }
}
