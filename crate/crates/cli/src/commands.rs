//! Subcommand bodies. Each returns the process exit status on success.

use std::fs;
use std::io::Write;
use std::path::Path;

use robin_ball::verify::asymptotic_samples;
use robin_ball::{CheckReport, ModeIndex, Order, ProblemSpec, RootTable, Sigma, Solver, Violation};
use serde_json::json;

use crate::args::{CacheAction, Command, Suite};
use crate::cache::{self, CacheFile, CacheFormat};
use crate::config::{RunConfig, DEFAULT_BURN_IN, DEFAULT_SCAN_CUTOFF, DEFAULT_SERIES_LENGTH};
use crate::error::{CliError, Result};
use crate::output::{self, CacheInfoRow};

pub const MONOTONICITY_SIGMAS: [&str; 6] = ["-2", "0", "2", "10", "100", "1e6"];

pub fn execute(cfg: &RunConfig, command: &Command, out: &mut dyn Write) -> Result<i32> {
    let solver = Solver::default();
    match command {
        Command::Spectrum => spectrum(cfg, &solver, out),
        Command::Pleijel => pleijel(cfg, &solver, out),
        Command::Verify { suite } => {
            let report = verify(cfg, &solver, *suite)?;
            output::write_report(out, cfg.format, &cfg.spec, &report)?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::ScanCoincidences => {
            let hits = solver.scan_coincidences(&cfg.spec, cfg.m_max_or(50), cfg.k_max_or(50), cfg.tol_or(1e-9))?;
            output::write_coincidences(out, cfg.format, &cfg.spec, &hits)?;
            Ok(0)
        }
        Command::Cache { action } => {
            let dir = cfg.cache_dir.as_deref().expect("checked by RunConfig::check_for");
            match action {
                CacheAction::Info => cache_info(cfg, &solver, dir, out),
                CacheAction::Clear => cache_clear(dir, out),
            }
        }
    }
}

fn spectrum(cfg: &RunConfig, solver: &Solver, out: &mut dyn Write) -> Result<i32> {
    let s = solver.enumerate_spectrum(&cfg.spec, cfg.spectrum_limit())?;
    let rows = output::spectrum_rows(&s, cfg.lambda.is_none().then(|| cfg.count.unwrap_or(crate::config::DEFAULT_SPECTRUM_COUNT)));
    output::write_spectrum(out, cfg.format, &cfg.spec, &rows)?;
    Ok(0)
}

fn pleijel(cfg: &RunConfig, solver: &Solver, out: &mut dyn Write) -> Result<i32> {
    let m_max = cfg.m_max_or(DEFAULT_SCAN_CUTOFF);
    let k_max = cfg.k_max_or(DEFAULT_SCAN_CUTOFF);
    let table = match &cfg.cache_dir {
        Some(dir) => cached_table(cfg, solver, dir, m_max, k_max)?,
        None => solver.scan_table(&cfg.spec, m_max, k_max)?,
    };
    let scan = solver.pleijel_scan_table(&table, m_max, k_max, cfg.burn_in.unwrap_or(DEFAULT_BURN_IN))?;
    let series = solver.running_quotients(&cfg.spec, cfg.count.unwrap_or(DEFAULT_SERIES_LENGTH))?;
    output::write_pleijel(out, cfg.format, &cfg.spec, &scan, &series)?;
    Ok(0)
}

/// Root table covering the cutoffs, from the cache when a valid file covers
/// them, else built afresh and saved (reusing any residuals already on disk).
pub fn cached_table(cfg: &RunConfig, solver: &Solver, dir: &Path, m_max: u32, k_max: u32) -> Result<RootTable> {
    let path = cache::cache_path(dir, &cfg.spec);
    let format = match CacheFile::read(&path) {
        Ok(Some((_, f))) => f,
        _ => cfg.cache_format,
    };
    let (previous, table) = cache::load_table(solver, &cfg.spec, &path);
    if let Some(t) = table.filter(|t| t.covers(m_max, k_max)) {
        return Ok(t);
    }
    let table = solver.scan_table(&cfg.spec, m_max, k_max)?;
    let file = CacheFile::from_table(solver, &table, previous.as_ref())?;
    file.write(&path, format)?;
    Ok(table)
}

fn violation(mode: ModeIndex, relation: String, lhs: f64, rhs: f64) -> Violation {
    Violation { mode, relation, lhs, rhs, margin: rhs - lhs }
}

/// The three mode sequences of the index-ratio suite.
pub fn index_ratio_sequences(m_max: u32, k_max: u32) -> Vec<(&'static str, Vec<ModeIndex>)> {
    let t_max = m_max.min(k_max) / 4;
    vec![
        ("diagonal", (1..=t_max.max(1)).map(|t| ModeIndex::new(t, t)).collect()),
        ("radial", (1..=k_max).map(|k| ModeIndex::new(0, k)).collect()),
        ("angular", (0..=m_max).map(|m| ModeIndex::new(m, 1)).collect()),
    ]
}

/// Runs the index-ratio check on each sequence and merges the reports. The
/// final ratio of every sequence must also lie within a quarter of the band.
pub fn index_ratio(solver: &Solver, spec: &ProblemSpec, m_max: u32, k_max: u32, tol: f64) -> Result<CheckReport> {
    let threshold = 500.0;
    let band = (1.0 - tol, 1.0 + tol);
    let final_band = (1.0 - tol / 4.0, 1.0 + tol / 4.0);
    let mut report: Option<CheckReport> = None;
    for (name, modes) in index_ratio_sequences(m_max, k_max) {
        let mut r = solver.check_index_ratio(spec, &modes, threshold, band)?;
        if let (Some(ratio), Some(&last)) = (r.diagnostics.get("final_ratio").and_then(|v| v.as_f64()), modes.last()) {
            r.checked += 1;
            if ratio < final_band.0 {
                r.violations.push(violation(last, format!("{name}: final ratio >= {}", final_band.0), final_band.0, ratio));
            } else if ratio > final_band.1 {
                r.violations.push(violation(last, format!("{name}: final ratio <= {}", final_band.1), ratio, final_band.1));
            }
        }
        let acc = report.get_or_insert_with(|| CheckReport {
            violations: Vec::new(),
            worst_margin: None,
            checked: 0,
            diagnostics: Default::default(),
            ..r.clone()
        });
        acc.checked += r.checked;
        acc.violations.extend(r.violations);
        acc.worst_margin = match (acc.worst_margin, r.worst_margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        acc.parameters.insert(format!("{name}.modes"), json!(modes.len()));
        for (k, v) in r.diagnostics {
            acc.diagnostics.insert(format!("{name}.{k}"), v);
        }
    }
    let mut report = report.expect("three sequences");
    report.parameters.remove("modes");
    report.parameters.insert("final_band".into(), json!([final_band.0, final_band.1]));
    report.pass = report.violations.is_empty();
    Ok(report)
}

fn verify(cfg: &RunConfig, solver: &Solver, suite: Suite) -> Result<CheckReport> {
    let spec = &cfg.spec;
    let report = match suite {
        Suite::Interlacing => solver.check_interlacing(spec, cfg.m_max_or(100), cfg.k_max_or(100))?,
        Suite::Spacing => {
            let mut nus: Vec<Order> = (0..=cfg.m_max_or(20)).map(|m| spec.order(m)).collect();
            nus.dedup();
            solver.check_spacing(&nus, cfg.k_max_or(500))?
        }
        Suite::Weyl => solver.check_weyl(spec, cfg.count.unwrap_or(100_000), cfg.tol_or(0.02))?,
        Suite::IndexRatio => index_ratio(solver, spec, cfg.m_max_or(2000), cfg.k_max_or(2000), cfg.tol_or(0.02))?,
        Suite::Coincidences => solver.check_coincidences(spec, cfg.m_max_or(50), cfg.k_max_or(50), cfg.tol_or(1e-9))?,
        Suite::Asymptotics => solver.fit_index_asymptotics(spec.d(), &asymptotic_samples(), cfg.tol_or(0.05))?,
        Suite::Gamma => solver.check_gamma(cfg.d_max.unwrap_or(12))?,
        Suite::Monotonicity => {
            let sigmas = MONOTONICITY_SIGMAS.iter().map(|s| Sigma::parse(s)).collect::<robin_ball::Result<Vec<_>>>()?;
            solver.check_sigma_monotonicity(spec.d(), &sigmas, cfg.m_max_or(20), cfg.k_max_or(20))?
        }
        Suite::DirichletLimit => solver.check_dirichlet_limit(spec, cfg.m_max_or(20), cfg.k_max_or(20), cfg.tol_or(1e-3))?,
    };
    Ok(report)
}

fn is_cache_file(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == cache::EXTENSION)
}

fn cache_files(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let rd = match fs::read_dir(dir) {
        Ok(rd) => rd,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(CliError::io(dir, e)),
    };
    let mut files = Vec::new();
    for entry in rd {
        let p = entry.map_err(|e| CliError::io(dir, e))?.path();
        if p.is_file() && is_cache_file(&p) {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

fn cache_info(cfg: &RunConfig, solver: &Solver, dir: &Path, out: &mut dyn Write) -> Result<i32> {
    let mut rows = Vec::new();
    for path in cache_files(dir)? {
        let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let row = match CacheFile::read(&path) {
            Ok(Some((c, format))) => {
                let status = match cache::header_spec(&c.header) {
                    Some(spec) => match c.validate(solver, &spec, &path) {
                        Ok(()) => "ok".to_string(),
                        Err(e) => e.to_string(),
                    },
                    None => "unreadable header".to_string(),
                };
                CacheInfoRow {
                    file,
                    format: match format {
                        CacheFormat::Binary => "binary",
                        CacheFormat::Csv => "csv",
                    },
                    d: Some(c.header.d),
                    boundary: Some(c.header.boundary()),
                    sigma: c.header.sigma.clone(),
                    x_max: Some(c.header.x_max),
                    entries: Some(c.entries.len() as u64),
                    status,
                }
            }
            Ok(None) => continue,
            Err(e) => CacheInfoRow {
                file,
                format: "unknown",
                d: None,
                boundary: None,
                sigma: None,
                x_max: None,
                entries: None,
                status: e.to_string(),
            },
        };
        rows.push(row);
    }
    output::write_cache_info(out, cfg.format, &rows)?;
    Ok(0)
}

fn cache_clear(dir: &Path, out: &mut dyn Write) -> Result<i32> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["removed"])?;
    for path in cache_files(dir)? {
        fs::remove_file(&path).map_err(|e| CliError::io(&path, e))?;
        w.write_record([path.display().to_string()])?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))?;
    Ok(0)
}
