//! Index of an eigenvalue in the ordered spectrum: one plus the number of
//! eigenvalues strictly below it, counted with multiplicity.

use serde::{Deserialize, Serialize};

use super::table::{total_count, RootTable};
use super::{multiplicity, LineKind, Solver, SpectralLine};
use crate::error::{Error, Result};
use crate::problem::{ModeIndex, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexMethod {
    /// Merge of all marched roots below the target.
    Direct,
    /// Sum of per-order counting functions evaluated at the target root.
    Counting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRecord {
    pub mode: ModeIndex,
    /// Index in the spectrum the mode belongs to.
    pub iota: u64,
    /// Index of the Dirichlet mode with the same `(m, k)`; absent for `k = 0`.
    pub iota_d: Option<u64>,
    pub method: IndexMethod,
}

impl Solver {
    pub fn index_dirichlet(&self, d: u32, m: u32, k: u32, method: IndexMethod) -> Result<IndexRecord> {
        let spec = ProblemSpec::dirichlet(d)?;
        let iota = self.index_of(&spec, m, k, method)?;
        Ok(IndexRecord { mode: ModeIndex::new(m, k), iota, iota_d: Some(iota), method })
    }

    pub fn index_robin(&self, spec: &ProblemSpec, m: u32, k: u32, method: IndexMethod) -> Result<IndexRecord> {
        spec.require_robin()?;
        let iota = self.index_of(spec, m, k, method)?;
        let iota_d = if k >= 1 {
            Some(self.index_of(&ProblemSpec::dirichlet(spec.d())?, m, k, method)?)
        } else {
            None
        };
        Ok(IndexRecord { mode: ModeIndex::new(m, k), iota, iota_d, method })
    }

    /// Index of mode `(m, k)` in `spec`'s spectrum.
    pub fn index_of(&self, spec: &ProblemSpec, m: u32, k: u32, method: IndexMethod) -> Result<u64> {
        let nonpos = self.nonpositive_lines(spec)?;
        if k == 0 {
            return self.index_at(spec, &nonpos, m, 0, 0.0, method);
        }
        let root = self.mode_root(spec, m, k)?;
        self.index_at(spec, &nonpos, m, k, root.root, method)
    }

    /// Index of mode `(m, k)` whose radial root `x` is already known; `nonpos`
    /// are the non-positive lines of `spec`.
    pub(crate) fn index_at(
        &self,
        spec: &ProblemSpec,
        nonpos: &[SpectralLine],
        m: u32,
        k: u32,
        x: f64,
        method: IndexMethod,
    ) -> Result<u64> {
        let d = spec.d();
        let neg_m = nonpos.iter().any(|l| l.mode.m == m && l.kind == LineKind::RobinNegative);
        if k == 0 {
            let Some(target) = nonpos.iter().find(|l| l.mode == ModeIndex::new(m, 0)) else {
                return Err(Error::InvalidSpec(format!("mode ({m}, 0) has no negative eigenvalue")));
            };
            let below: u64 = nonpos
                .iter()
                .filter(|l| l.mu < target.mu && l.mode.m != m)
                .map(|l| l.multiplicity)
                .sum();
            return Ok(1 + below);
        }
        let n_neg: u64 = nonpos.iter().filter(|l| l.mu < 0.0).map(|l| l.multiplicity).sum();
        if x == 0.0 {
            return Ok(1 + n_neg);
        }
        let own = u64::from(k - 1) + u64::from(neg_m);
        let below = match method {
            IndexMethod::Counting => total_count(&self.window, spec, x, Some((m, own)))?,
            IndexMethod::Direct => {
                let table = RootTable::build(&self.window, spec, x * (1.0 + 1e-9))?;
                let mut sum = own.saturating_mul(multiplicity(m, d));
                for (l, o) in table.orders().iter().enumerate() {
                    if l as u32 == m {
                        continue;
                    }
                    let n = o.positive.partition_point(|&r| r < x) as u64 + u64::from(o.negative.is_some());
                    sum = sum.saturating_add(n.saturating_mul(multiplicity(l as u32, d)));
                }
                sum
            }
        };
        Ok(1 + below)
    }
}
