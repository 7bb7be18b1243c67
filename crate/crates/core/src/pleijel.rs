//! Nodal counts of separated eigenfunctions on the disk and Pleijel quotients.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{ModeIndex, ProblemSpec};
use crate::spectrum::{
    equation, march_first_k, multiplicity, Branch, IndexMethod, Limit, LineKind, RootTable,
    Solver,
};

/// Nodal domains of `f(r) cos(m theta)` on the unit disk.
///
/// The angular factor gives `2m` sectors (one for `m = 0`). The radial factor
/// has one band per sign region of `J_nu(x r)` on `[0, 1]`: `k` bands on the
/// positive branch when `m >= -sigma`, `k + 1` when `m < -sigma` (the root then
/// lies past `j_{nu,k}`), and a single band on the negative and zero branches.
pub fn nodal_count_2d(spec: &ProblemSpec, m: u32, k: u32, kind: LineKind) -> Result<u64> {
    if spec.d() != 2 {
        return Err(Error::Dimension(spec.d()));
    }
    let sectors = u64::from((2 * m).max(1));
    let bands = match kind {
        LineKind::RobinNegative | LineKind::RobinZero => 1,
        LineKind::DirichletZero | LineKind::RobinPositive => {
            if k == 0 {
                return Err(Error::InvalidSpec(format!("mode ({m}, 0) is not on the positive branch")));
            }
            let past = match equation(spec, m)? {
                Some(crate::spectrum::march::Equation::Robin { a, .. }) => a < 0.0,
                _ => false,
            };
            u64::from(k) + u64::from(past)
        }
    };
    Ok(sectors * bands)
}

/// Kind of the line that mode `(m, k)` produces.
pub fn line_kind(spec: &ProblemSpec, m: u32, k: u32) -> LineKind {
    match spec.sigma() {
        None => LineKind::DirichletZero,
        Some(_) if k == 0 => LineKind::RobinNegative,
        Some(s) if k == 1 && s.cancels(m) => LineKind::RobinZero,
        Some(_) => LineKind::RobinPositive,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientRecord {
    pub mode: ModeIndex,
    pub nodal_count: u64,
    pub index: u64,
    pub quotient: f64,
    pub eigenvalue: f64,
}

impl QuotientRecord {
    /// Exact comparison of `N / iota`.
    pub fn cmp_quotient(&self, other: &Self) -> Ordering {
        let l = u128::from(self.nodal_count) * u128::from(other.index);
        let r = u128::from(other.nodal_count) * u128::from(self.index);
        l.cmp(&r)
    }
}

/// Result of a Pleijel scan. `records` keeps only the largest quotients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub supremum: f64,
    pub argmax: ModeIndex,
    /// Best quotients, largest first (ties by smaller `(m, k)`).
    pub records: Vec<QuotientRecord>,
    pub cutoffs: (u32, u32),
    pub burn_in: f64,
    /// Modes that passed the burn-in.
    pub scanned: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunningQuotient {
    pub index: u64,
    pub mode: ModeIndex,
    pub nodal_count: u64,
    pub quotient: f64,
    pub running_max: f64,
}

/// Number of records kept in a [`ScanResult`].
pub const SCAN_RECORDS: usize = 64;
/// Modes whose direct index is re-derived from the counting functions.
const CROSS_CHECKS: usize = 24;

fn require_2d(spec: &ProblemSpec) -> Result<()> {
    if spec.d() == 2 {
        Ok(())
    } else {
        Err(Error::Dimension(spec.d()))
    }
}

impl Solver {
    /// Nodal count, index and quotient of one mode (counting-function index).
    pub fn quotient(&self, spec: &ProblemSpec, m: u32, k: u32) -> Result<QuotientRecord> {
        require_2d(spec)?;
        let kind = line_kind(spec, m, k);
        let nodal_count = nodal_count_2d(spec, m, k, kind)?;
        let index = self.index_of(spec, m, k, IndexMethod::Counting)?;
        let eigenvalue = if k == 0 {
            let r = self.negative_robin_root(spec, m)?.map_or(0.0, |r| r.root);
            -r * r
        } else {
            let r = self.mode_root(spec, m, k)?.root;
            r * r
        };
        Ok(QuotientRecord {
            mode: ModeIndex::new(m, k),
            nodal_count,
            index,
            quotient: nodal_count as f64 / index as f64,
            eigenvalue,
        })
    }

    /// Supremum of `N / iota` over modes `m <= m_max`, `1 <= k <= k_max` with
    /// eigenvalue at least `burn_in`.
    ///
    /// Indices come from one sorted merge of every root below the largest
    /// scanned one; a sample of them, the maximiser included, is re-derived
    /// from the counting functions and must agree exactly.
    pub fn pleijel_scan(&self, spec: &ProblemSpec, m_max: u32, k_max: u32, burn_in: f64) -> Result<ScanResult> {
        let table = self.scan_table(spec, m_max, k_max)?;
        self.pleijel_scan_table(&table, m_max, k_max, burn_in)
    }

    /// Smallest root table that holds the first `k_max` roots of every degree
    /// `m <= m_max`.
    pub fn scan_table(&self, spec: &ProblemSpec, m_max: u32, k_max: u32) -> Result<RootTable> {
        require_2d(spec)?;
        if k_max == 0 {
            return Err(Error::InvalidSpec("k_max must be at least 1".into()));
        }
        let top = march_first_k(&self.window, &Branch::of(spec, m_max)?, k_max as usize)?;
        let mut x_max = top[k_max as usize - 1] * (1.0 + 1e-9) + 1e-9;
        loop {
            let t = RootTable::build(&self.window, spec, x_max)?;
            if t.covers(m_max, k_max) {
                return Ok(t);
            }
            if x_max >= self.window.x_max {
                return Err(Error::Window(format!("scan needs roots beyond x_max = {}", self.window.x_max)));
            }
            x_max = (x_max * 1.05).min(self.window.x_max);
        }
    }

    /// [`Solver::pleijel_scan`] over a prebuilt table, which may extend past the
    /// cutoffs.
    pub fn pleijel_scan_table(&self, table: &RootTable, m_max: u32, k_max: u32, burn_in: f64) -> Result<ScanResult> {
        let spec = table.spec();
        require_2d(spec)?;
        if k_max == 0 {
            return Err(Error::InvalidSpec("k_max must be at least 1".into()));
        }
        if !table.covers(m_max, k_max) {
            return Err(Error::InvalidSpec(format!("root table does not cover m <= {m_max}, k <= {k_max}")));
        }
        let d = spec.d();
        let n_neg: u64 = table
            .orders()
            .iter()
            .enumerate()
            .filter(|(_, o)| o.negative.is_some())
            .map(|(m, _)| multiplicity(m as u32, d))
            .sum();

        let mut flat: Vec<(f64, u32, u32)> = Vec::with_capacity(table.len());
        for (m, o) in table.orders().iter().enumerate() {
            for (i, &r) in o.positive.iter().enumerate() {
                flat.push((r, m as u32, i as u32 + 1));
            }
        }
        flat.par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

        let mut candidates: Vec<QuotientRecord> = Vec::new();
        let mut below = n_neg;
        let mut i = 0;
        while i < flat.len() {
            let r = flat[i].0;
            let mut j = i;
            let mut tie_weight = 0u64;
            while j < flat.len() && flat[j].0 == r {
                tie_weight += multiplicity(flat[j].1, d);
                j += 1;
            }
            for &(root, m, k) in &flat[i..j] {
                let mu = root * root;
                if m <= m_max && k <= k_max && mu >= burn_in {
                    let nodal_count = nodal_count_2d(spec, m, k, line_kind(spec, m, k))?;
                    let index = below + 1;
                    candidates.push(QuotientRecord {
                        mode: ModeIndex::new(m, k),
                        nodal_count,
                        index,
                        quotient: nodal_count as f64 / index as f64,
                        eigenvalue: mu,
                    });
                }
            }
            below += tie_weight;
            i = j;
        }
        drop(flat);
        if candidates.is_empty() {
            return Err(Error::InvalidSpec(format!(
                "no mode with m <= {m_max}, k <= {k_max} has eigenvalue >= {burn_in}"
            )));
        }
        let order = |a: &QuotientRecord, b: &QuotientRecord| b.cmp_quotient(a).then(a.mode.cmp(&b.mode));
        let scanned = candidates.len() as u64;
        let keep = SCAN_RECORDS.min(candidates.len());
        if candidates.len() > keep {
            candidates.select_nth_unstable_by(keep - 1, order);
            candidates.truncate(keep);
        }
        candidates.sort_by(order);

        // spot checks against the counting functions
        let step = (scanned as usize / CROSS_CHECKS).max(1);
        let mut probes: Vec<QuotientRecord> = vec![candidates[0]];
        probes.extend(candidates.iter().skip(1).step_by(step.min(keep).max(1)).take(CROSS_CHECKS / 2).copied());
        probes.par_iter().try_for_each(|rec| self.cross_check(spec, rec))?;

        let best = candidates[0];
        Ok(ScanResult {
            supremum: best.quotient,
            argmax: best.mode,
            records: candidates,
            cutoffs: (m_max, k_max),
            burn_in,
            scanned,
        })
    }

    fn cross_check(&self, spec: &ProblemSpec, rec: &QuotientRecord) -> Result<()> {
        let (m, k) = (rec.mode.m, rec.mode.k);
        let b = Branch::of(spec, m)?;
        let x = rec.eigenvalue.sqrt();
        if x == 0.0 {
            return Ok(());
        }
        let neg = matches!(b.eq, crate::spectrum::march::Equation::Robin { a, .. } if a < 0.0);
        let own = u64::from(k - 1) + u64::from(neg);
        let counted = 1 + crate::spectrum::total_count_at(&self.window, spec, x, Some((m, own)))?;
        if counted != rec.index {
            return Err(Error::Accuracy(format!(
                "index of mode ({m}, {k}): merge gives {}, counting gives {counted}",
                rec.index
            )));
        }
        Ok(())
    }

    /// Per-index nodal quotients `N_l / l` along the ordered spectrum.
    pub fn running_quotients(&self, spec: &ProblemSpec, n_max: u64) -> Result<Vec<RunningQuotient>> {
        require_2d(spec)?;
        let spectrum = self.enumerate_spectrum(spec, Limit::Count(n_max))?;
        let mut out = Vec::with_capacity(n_max as usize);
        let mut best: Option<(u64, u64)> = None;
        let mut index = 0u64;
        'lines: for line in &spectrum.lines {
            let nodal_count = nodal_count_2d(spec, line.mode.m, line.mode.k, line.kind)?;
            for _ in 0..line.multiplicity {
                index += 1;
                if index > n_max {
                    break 'lines;
                }
                let better = best.map_or(true, |(n, l)| u128::from(nodal_count) * u128::from(l) > u128::from(n) * u128::from(index));
                if better {
                    best = Some((nodal_count, index));
                }
                let (bn, bl) = best.unwrap_or((nodal_count, index));
                out.push(RunningQuotient {
                    index,
                    mode: line.mode,
                    nodal_count,
                    quotient: nodal_count as f64 / index as f64,
                    running_max: bn as f64 / bl as f64,
                });
            }
        }
        Ok(out)
    }
}

pub fn quotient(spec: &ProblemSpec, m: u32, k: u32) -> Result<QuotientRecord> {
    Solver::default().quotient(spec, m, k)
}

pub fn pleijel_scan(spec: &ProblemSpec, m_max: u32, k_max: u32, burn_in: f64) -> Result<ScanResult> {
    Solver::default().pleijel_scan(spec, m_max, k_max, burn_in)
}

pub fn running_quotients(spec: &ProblemSpec, n_max: u64) -> Result<Vec<RunningQuotient>> {
    Solver::default().running_quotients(spec, n_max)
}
