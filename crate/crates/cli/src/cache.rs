//! Persistent root tables for Pleijel scans.
//!
//! Binary layout (little endian), magic `RBCACHE1`:
//! `version u32, d u32, boundary u8 (0 dirichlet, 1 robin), sigma_len u32,
//! sigma utf-8, accuracy_target f64, x_max f64, n u64`, then `n` entries of
//! `m u32, k u32, root f64, residual f64`, then the SHA-256 of everything
//! before it. The CSV variant starts with `#RBCACHE1-CSV`, carries the header
//! as `#key=value` lines and ends with `#sha256=<hex>`.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use robin_ball::spectrum::OrderRoots;
use robin_ball::{Boundary, ProblemSpec, RootTable, Sigma, Solver, ACCURACY_TARGET, RESIDUAL_TOL};
use sha2::{Digest, Sha256};

pub use crate::args::CacheFormat;
use crate::error::{CliError, Result};
use crate::output::float;

pub const MAGIC_BINARY: &[u8; 8] = b"RBCACHE1";
pub const MAGIC_CSV: &str = "#RBCACHE1-CSV";
pub const FORMAT_VERSION: u32 = 1;
pub const EXTENSION: &str = "rbcache";

#[derive(Debug, Clone, PartialEq)]
pub struct CacheHeader {
    pub version: u32,
    pub d: u32,
    /// Literal as given on the command line; `None` for Dirichlet.
    pub sigma: Option<String>,
    pub accuracy_target: f64,
    pub x_max: f64,
}

impl CacheHeader {
    pub fn for_spec(spec: &ProblemSpec, x_max: f64) -> Self {
        CacheHeader {
            version: FORMAT_VERSION,
            d: spec.d(),
            sigma: spec.sigma().map(|s| s.literal().to_string()),
            accuracy_target: ACCURACY_TARGET,
            x_max,
        }
    }

    pub fn boundary(&self) -> &'static str {
        if self.sigma.is_some() {
            "robin"
        } else {
            "dirichlet"
        }
    }

    fn binary(&self) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(&self.version.to_le_bytes());
        b.extend_from_slice(&self.d.to_le_bytes());
        b.push(u8::from(self.sigma.is_some()));
        let s = self.sigma.as_deref().unwrap_or("").as_bytes();
        b.extend_from_slice(&(s.len() as u32).to_le_bytes());
        b.extend_from_slice(s);
        b.extend_from_slice(&self.accuracy_target.to_le_bytes());
        b.extend_from_slice(&self.x_max.to_le_bytes());
        b
    }

    /// Why this header cannot serve `spec`, if it cannot.
    pub fn mismatch(&self, spec: &ProblemSpec) -> Option<String> {
        if self.version != FORMAT_VERSION {
            return Some(format!("format version {} (expected {FORMAT_VERSION})", self.version));
        }
        if self.d != spec.d() {
            return Some(format!("dimension {} (expected {})", self.d, spec.d()));
        }
        let want = spec.sigma().map(|s| s.literal());
        if self.sigma.as_deref() != want {
            return Some(format!(
                "boundary {:?} (expected {:?})",
                self.sigma.as_deref().unwrap_or("dirichlet"),
                want.unwrap_or("dirichlet")
            ));
        }
        if self.accuracy_target != ACCURACY_TARGET {
            return Some(format!("accuracy target {:e} (expected {ACCURACY_TARGET:e})", self.accuracy_target));
        }
        None
    }
}

/// `k = 0` is the negative-branch root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheEntry {
    pub m: u32,
    pub k: u32,
    pub root: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CacheFile {
    pub header: CacheHeader,
    /// Sorted by `(m, k)`.
    pub entries: Vec<CacheEntry>,
}

fn corrupt(path: &Path, why: impl std::fmt::Display) -> CliError {
    CliError::Cache(format!("{}: {why}", path.display()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.buf.get(self.at..self.at.checked_add(n)?)?;
        self.at += n;
        Some(s)
    }

    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }

    fn u64(&mut self) -> Option<u64> {
        Some(u64::from_le_bytes(self.take(8)?.try_into().ok()?))
    }

    fn f64(&mut self) -> Option<f64> {
        Some(f64::from_le_bytes(self.take(8)?.try_into().ok()?))
    }
}

impl CacheFile {
    /// Entries for every root in `table`. Residuals of entries whose root is
    /// bit-identical to one in `previous` are reused; the rest are evaluated.
    pub fn from_table(solver: &Solver, table: &RootTable, previous: Option<&CacheFile>) -> Result<CacheFile> {
        let spec = table.spec();
        let mut todo = Vec::with_capacity(table.len());
        for (m, o) in table.orders().iter().enumerate() {
            let m = m as u32;
            if let Some(r) = o.negative {
                todo.push((m, 0, r));
            }
            for (i, &r) in o.positive.iter().enumerate() {
                todo.push((m, i as u32 + 1, r));
            }
        }
        let known = |m: u32, k: u32, root: f64| -> Option<f64> {
            let p = previous?;
            let i = p.entries.binary_search_by(|e| (e.m, e.k).cmp(&(m, k))).ok()?;
            let e = p.entries[i];
            (e.root.to_bits() == root.to_bits()).then_some(e.residual)
        };
        let entries = todo
            .par_iter()
            .map(|&(m, k, root)| -> Result<CacheEntry> {
                let residual = match known(m, k, root) {
                    Some(r) => r,
                    None => solver.root_residual(spec, m, k, root)?,
                };
                Ok(CacheEntry { m, k, root, residual })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CacheFile { header: CacheHeader::for_spec(spec, table.x_max()), entries })
    }

    pub fn to_table(&self, spec: &ProblemSpec) -> Result<RootTable> {
        let n_orders = self.entries.last().map_or(0, |e| e.m as usize + 1);
        let mut orders = vec![OrderRoots::default(); n_orders];
        for e in &self.entries {
            let o = &mut orders[e.m as usize];
            if e.k == 0 {
                o.negative = Some(e.root);
            } else {
                o.positive.push(e.root);
            }
        }
        Ok(RootTable::from_parts(spec.clone(), self.header.x_max, orders)?)
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let mut b = MAGIC_BINARY.to_vec();
        b.extend(self.header.binary());
        b.extend_from_slice(&(self.entries.len() as u64).to_le_bytes());
        for e in &self.entries {
            b.extend_from_slice(&e.m.to_le_bytes());
            b.extend_from_slice(&e.k.to_le_bytes());
            b.extend_from_slice(&e.root.to_le_bytes());
            b.extend_from_slice(&e.residual.to_le_bytes());
        }
        let sum = Sha256::digest(&b);
        b.extend_from_slice(&sum);
        b
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let h = &self.header;
        let mut s = format!(
            "{MAGIC_CSV}\n#version={}\n#d={}\n#boundary={}\n#sigma={}\n#accuracy_target={}\n#x_max={}\nm,k,root,residual\n",
            h.version,
            h.d,
            h.boundary(),
            h.sigma.as_deref().unwrap_or(""),
            float(h.accuracy_target),
            float(h.x_max)
        );
        for e in &self.entries {
            s.push_str(&format!("{},{},{},{}\n", e.m, e.k, float(e.root), float(e.residual)));
        }
        let sum = Sha256::digest(s.as_bytes());
        s.push_str(&format!("#sha256={}\n", hex(&sum)));
        s.into_bytes()
    }

    /// Parses either format, chosen by the magic header, and checks the checksum
    /// and the entry order. Compatibility and residuals are left to [`CacheFile::validate`].
    pub fn parse(bytes: &[u8], path: &Path) -> Result<(CacheFile, CacheFormat)> {
        if bytes.starts_with(MAGIC_BINARY) {
            Ok((Self::parse_binary(bytes, path)?, CacheFormat::Binary))
        } else if bytes.starts_with(MAGIC_CSV.as_bytes()) {
            Ok((Self::parse_csv(bytes, path)?, CacheFormat::Csv))
        } else {
            Err(corrupt(path, "unknown magic header"))
        }
    }

    fn parse_binary(bytes: &[u8], path: &Path) -> Result<CacheFile> {
        if bytes.len() < MAGIC_BINARY.len() + 32 {
            return Err(corrupt(path, "truncated"));
        }
        let (body, sum) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != sum {
            return Err(corrupt(path, "checksum mismatch"));
        }
        let mut r = Reader { buf: body, at: MAGIC_BINARY.len() };
        let short = || corrupt(path, "truncated");
        let version = r.u32().ok_or_else(short)?;
        let d = r.u32().ok_or_else(short)?;
        let robin = r.take(1).ok_or_else(short)?[0];
        let len = r.u32().ok_or_else(short)? as usize;
        let lit = r.take(len).ok_or_else(short)?;
        let lit = std::str::from_utf8(lit).map_err(|_| corrupt(path, "sigma is not utf-8"))?;
        let sigma = match robin {
            0 => None,
            1 => Some(lit.to_string()),
            _ => return Err(corrupt(path, "bad boundary tag")),
        };
        let accuracy_target = r.f64().ok_or_else(short)?;
        let x_max = r.f64().ok_or_else(short)?;
        let n = r.u64().ok_or_else(short)?;
        if n.checked_mul(24).map_or(true, |b| b != (body.len() - r.at) as u64) {
            return Err(corrupt(path, "entry count does not match the file size"));
        }
        let mut entries = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let m = r.u32().ok_or_else(short)?;
            let k = r.u32().ok_or_else(short)?;
            let root = r.f64().ok_or_else(short)?;
            let residual = r.f64().ok_or_else(short)?;
            entries.push(CacheEntry { m, k, root, residual });
        }
        let c = CacheFile { header: CacheHeader { version, d, sigma, accuracy_target, x_max }, entries };
        c.check_order(path)?;
        Ok(c)
    }

    fn parse_csv(bytes: &[u8], path: &Path) -> Result<CacheFile> {
        let text = std::str::from_utf8(bytes).map_err(|_| corrupt(path, "not utf-8"))?;
        let tail = text.trim_end_matches('\n').rfind('\n').ok_or_else(|| corrupt(path, "truncated"))? + 1;
        let (body, last) = text.split_at(tail);
        let want = last.trim_end().strip_prefix("#sha256=").ok_or_else(|| corrupt(path, "missing checksum"))?;
        if hex(&Sha256::digest(body.as_bytes())) != want {
            return Err(corrupt(path, "checksum mismatch"));
        }
        let mut lines = body.lines().skip(1);
        let mut field = |key: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| corrupt(path, "truncated header"))?;
            line.strip_prefix('#')
                .and_then(|l| l.strip_prefix(key))
                .and_then(|l| l.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| corrupt(path, format!("expected header field {key}")))
        };
        let num = |s: String, what: &str| -> Result<f64> { s.parse().map_err(|_| corrupt(path, format!("bad {what}"))) };
        let version: u32 = field("version")?.parse().map_err(|_| corrupt(path, "bad version"))?;
        let d: u32 = field("d")?.parse().map_err(|_| corrupt(path, "bad d"))?;
        let boundary = field("boundary")?;
        let lit = field("sigma")?;
        let sigma = match boundary.as_str() {
            "dirichlet" => None,
            "robin" => Some(lit),
            _ => return Err(corrupt(path, "bad boundary")),
        };
        let accuracy_target = num(field("accuracy_target")?, "accuracy target")?;
        let x_max = num(field("x_max")?, "x_max")?;
        let rest: String = lines.map(|l| format!("{l}\n")).collect();
        let mut rdr = csv::Reader::from_reader(rest.as_bytes());
        let mut entries = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| corrupt(path, e))?;
            let get = |i: usize| rec.get(i).ok_or_else(|| corrupt(path, "short row"));
            let int = |i: usize| -> Result<u32> { get(i)?.parse().map_err(|_| corrupt(path, "bad integer")) };
            let flt = |i: usize| -> Result<f64> { get(i)?.parse().map_err(|_| corrupt(path, "bad number")) };
            entries.push(CacheEntry { m: int(0)?, k: int(1)?, root: flt(2)?, residual: flt(3)? });
        }
        let c = CacheFile { header: CacheHeader { version, d, sigma, accuracy_target, x_max }, entries };
        c.check_order(path)?;
        Ok(c)
    }

    fn check_order(&self, path: &Path) -> Result<()> {
        if self.entries.windows(2).any(|w| (w[0].m, w[0].k) >= (w[1].m, w[1].k)) {
            return Err(corrupt(path, "entries not sorted by (m, k)"));
        }
        Ok(())
    }

    /// Indices of the entries re-evaluated on load: 1% of them (at least one),
    /// drawn from a generator seeded by the header alone.
    pub fn sample_indices(&self) -> Vec<usize> {
        let n = self.entries.len();
        if n == 0 {
            return Vec::new();
        }
        let seed: [u8; 32] = Sha256::digest(self.header.binary()).into();
        let mut rng = ChaCha8Rng::from_seed(seed);
        let mut idx = rand::seq::index::sample(&mut rng, n, n.div_ceil(100)).into_vec();
        idx.sort_unstable();
        idx
    }

    /// Header compatibility, residual bounds on every entry, and a fresh
    /// evaluation of the sampled residuals, which must reproduce the stored ones.
    pub fn validate(&self, solver: &Solver, spec: &ProblemSpec, path: &Path) -> Result<()> {
        if let Some(why) = self.header.mismatch(spec) {
            return Err(corrupt(path, format!("header mismatch: {why}")));
        }
        if let Some(e) = self.entries.iter().find(|e| !(e.residual >= 0.0 && e.residual <= RESIDUAL_TOL)) {
            return Err(corrupt(path, format!("stored residual {:e} of mode ({}, {})", e.residual, e.m, e.k)));
        }
        self.to_table(spec).map_err(|e| corrupt(path, e))?;
        let bad = self.sample_indices().into_par_iter().find_map_first(|i| {
            let e = self.entries[i];
            match solver.root_residual(spec, e.m, e.k, e.root) {
                Ok(r) if r <= RESIDUAL_TOL && (r - e.residual).abs() <= 1e-6 * r.max(e.residual) => None,
                Ok(r) => Some(format!("mode ({}, {}): stored residual {:e}, recomputed {r:e}", e.m, e.k, e.residual)),
                Err(err) => Some(format!("mode ({}, {}): {err}", e.m, e.k)),
            }
        });
        match bad {
            Some(why) => Err(corrupt(path, why)),
            None => Ok(()),
        }
    }

    pub fn read(path: &Path) -> Result<Option<(CacheFile, CacheFormat)>> {
        match fs::read(path) {
            Ok(bytes) => Self::parse(&bytes, path).map(Some),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
            Err(e) => Err(CliError::io(path, e)),
        }
    }

    /// Write to a temporary file in the same directory, sync, then rename.
    pub fn write(&self, path: &Path, format: CacheFormat) -> Result<()> {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let bytes = match format {
            CacheFormat::Binary => self.to_binary(),
            CacheFormat::Csv => self.to_csv(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
        tmp.write_all(&bytes).map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
        Ok(())
    }
}

pub fn cache_path(dir: &Path, spec: &ProblemSpec) -> PathBuf {
    dir.join(format!("{}.{EXTENSION}", spec.label()))
}

/// A usable table from the cache, or `None` (with a warning on stderr when a
/// file was present but rejected).
pub fn load_table(solver: &Solver, spec: &ProblemSpec, path: &Path) -> (Option<CacheFile>, Option<RootTable>) {
    let loaded = CacheFile::read(path).and_then(|c| match c {
        Some((c, _)) => c.validate(solver, spec, path).map(|_| Some(c)),
        None => Ok(None),
    });
    match loaded {
        Ok(Some(c)) => match c.to_table(spec) {
            Ok(t) => (Some(c), Some(t)),
            Err(e) => {
                eprintln!("warning: {e}; recomputing");
                (None, None)
            }
        },
        Ok(None) => (None, None),
        Err(e) => {
            eprintln!("warning: {e}; recomputing");
            (None, None)
        }
    }
}

/// Spec rebuilt from a header, for `cache info`.
pub fn header_spec(h: &CacheHeader) -> Option<ProblemSpec> {
    let boundary = match &h.sigma {
        Some(s) => Boundary::Robin(s.parse::<Sigma>().ok()?),
        None => Boundary::Dirichlet,
    };
    ProblemSpec::new(h.d, boundary).ok()
}
