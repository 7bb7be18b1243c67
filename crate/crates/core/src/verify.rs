//! Batch checks of the interlacing, spacing, counting and asymptotic facts the
//! spectrum relies on. Each suite returns a [`CheckReport`] listing every
//! violated inequality with both sides and the margin.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::problem::{ModeIndex, ProblemSpec, Sigma};
use crate::specfun::Order;
use crate::spectrum::{march_first_k, multiplicity, Branch, CertifiedRoot, IndexMethod, Solver};

/// Relative slack on every inequality, so that root uncertainty cannot
/// produce a false violation.
pub const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub mode: ModeIndex,
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; negative or below the slack for a violation.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, Value>,
    pub violations: Vec<Violation>,
    pub pass: bool,
    /// Smallest `rhs - lhs` over all checked inequalities; `None` if none were checked.
    pub worst_margin: Option<f64>,
    pub checked: u64,
    pub diagnostics: BTreeMap<String, Value>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport {
            check_name: name.to_string(),
            parameters: BTreeMap::new(),
            violations: Vec::new(),
            pass: true,
            worst_margin: None,
            checked: 0,
            diagnostics: BTreeMap::new(),
        }
    }

    fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), json!(v));
        self
    }

    fn diag(&mut self, key: &str, v: impl Serialize) {
        self.diagnostics.insert(key.to_string(), json!(v));
    }

    fn absorb(&mut self, t: Tally) {
        self.checked += t.checked;
        self.worst_margin = match (self.worst_margin, t.worst) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.violations.extend(t.violations);
    }

    fn finish(mut self) -> Self {
        self.pass = self.violations.is_empty();
        self
    }
}

/// Per-thread accumulator of inequality checks.
#[derive(Debug, Default)]
struct Tally {
    violations: Vec<Violation>,
    worst: Option<f64>,
    checked: u64,
}

impl Tally {
    fn record(&mut self, mode: ModeIndex, relation: &str, lhs: f64, rhs: f64, ok: bool) {
        let margin = rhs - lhs;
        self.checked += 1;
        self.worst = Some(self.worst.map_or(margin, |w| w.min(margin)));
        if !ok {
            self.violations.push(Violation { mode, relation: relation.to_string(), lhs, rhs, margin });
        }
    }

    fn slack(lhs: f64, rhs: f64) -> f64 {
        SLACK * 1f64.max(lhs.abs()).max(rhs.abs())
    }

    /// `lhs < rhs` with a gap of at least the slack.
    fn lt(&mut self, mode: ModeIndex, relation: &str, lhs: f64, rhs: f64) {
        let ok = rhs - lhs > Self::slack(lhs, rhs);
        self.record(mode, relation, lhs, rhs, ok);
    }

    /// `lhs <= rhs` up to the slack.
    fn le(&mut self, mode: ModeIndex, relation: &str, lhs: f64, rhs: f64) {
        let ok = rhs - lhs >= -Self::slack(lhs, rhs);
        self.record(mode, relation, lhs, rhs, ok);
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.violations.extend(other.violations);
        self
    }
}

fn roots_of(cs: &[CertifiedRoot]) -> Vec<f64> {
    cs.iter().map(|c| c.root).collect()
}

/// A coincidence between roots of different degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceHit {
    /// Robin parameter literal; absent for Dirichlet.
    pub sigma: Option<String>,
    pub mode_a: ModeIndex,
    pub mode_b: ModeIndex,
    pub roots: (f64, f64),
    pub gap: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InsufficientSpan("need at least two points".into()));
    }
    let n = points.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::InsufficientSpan(format!("non-positive sample ({x}, {y})")));
        }
        sx += x.ln();
        sy += y.ln();
    }
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (y.ln() - my);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientSpan("all abscissae are equal".into()));
    }
    Ok(sxy / sxx)
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: u32) -> f64 {
    let h = 0.5 * f64::from(d);
    (h * std::f64::consts::PI.ln() - statrs::function::gamma::ln_gamma(h + 1.0)).exp()
}

/// Diagonal modes `m = k = t` whose Dirichlet roots span slightly more than a decade from about 100.
pub fn asymptotic_samples() -> Vec<ModeIndex> {
    [24u32, 30, 38, 48, 60, 76, 95, 120, 150, 190, 235, 265]
        .iter()
        .map(|&t| ModeIndex::new(t, t))
        .collect()
}

impl Solver {
    /// Interlacing of Robin roots with Bessel zeros, the combined two-sided
    /// bracket for `k > 1`, and the bounds on the first root.
    pub fn check_interlacing(&self, spec: &ProblemSpec, m_max: u32, k_max: u32) -> Result<CheckReport> {
        let sigma = spec.require_robin()?.clone();
        let d = spec.d();
        let report = CheckReport::new("interlacing")
            .param("d", d)
            .param("sigma", sigma.literal())
            .param("m_max", m_max)
            .param("k_max", k_max);
        let per_m: Vec<(Tally, &'static str)> = (0..=m_max)
            .into_par_iter()
            .map(|m| -> Result<(Tally, &'static str)> {
                let nu = spec.order(m);
                let j = roots_of(&self.dirichlet_zeros(nu, k_max + 1)?);
                let x = roots_of(&self.robin_roots(spec, m, k_max)?);
                let neg = self.negative_robin_root(spec, m)?;
                let mut t = Tally::default();
                let mode = |k: usize| ModeIndex::new(m, k as u32);
                let branch = if sigma.cancels(m) {
                    "zero"
                } else if f64::from(m) + sigma.value() < 0.0 {
                    "below"
                } else {
                    "above"
                };
                for k in 1..=k_max as usize {
                    let xk = x[k - 1];
                    let (jm1, jk, jp1) = (if k >= 2 { j[k - 2] } else { 0.0 }, j[k - 1], j[k]);
                    match branch {
                        "above" => {
                            // 0 < x_1 < j_1 < x_2 < j_2 < ...
                            t.lt(mode(k), "j[k-1] < x[k]", jm1, xk);
                            t.lt(mode(k), "x[k] < j[k]", xk, jk);
                        }
                        "below" => {
                            // 0 < j_1 < x_1 < j_2 < x_2 < ...
                            t.lt(mode(k), "j[k] < x[k]", jk, xk);
                            t.lt(mode(k), "x[k] < j[k+1]", xk, jp1);
                        }
                        _ => {
                            if k == 1 {
                                t.le(mode(k), "x[1] = 0", xk, 0.0);
                            } else {
                                t.lt(mode(k), "j[k-1] < x[k]", jm1, xk);
                                t.lt(mode(k), "x[k] < j[k]", xk, jk);
                            }
                        }
                    }
                    if k > 1 {
                        t.lt(mode(k), "j[k-1] < x[k] (combined)", jm1, xk);
                        t.lt(mode(k), "x[k] < j[k+1] (combined)", xk, jp1);
                        t.lt(mode(k), "x[k-1] < x[k]", x[k - 2], xk);
                    }
                }
                let m2 = f64::from(m) * f64::from(m) - sigma.value() * sigma.value();
                let lower = m2.max(0.0).sqrt();
                t.le(mode(1), "sqrt(m^2 - sigma^2)^+ <= x[1]", lower, x[0]);
                t.lt(mode(1), "x[1] < j[2]", x[0], j[1]);
                match (branch, neg) {
                    ("below", Some(r)) => t.lt(mode(0), "0 < x[0]", 0.0, r.root),
                    ("below", None) => t.record(mode(0), "negative root exists", 0.0, 0.0, false),
                    (_, Some(r)) => t.record(mode(0), "no negative root", r.root, 0.0, false),
                    _ => {}
                }
                Ok((t, branch))
            })
            .collect::<Result<_>>()?;
        let mut report = report;
        let mut branches: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
        let mut total = Tally::default();
        for (m, (t, b)) in per_m.into_iter().enumerate() {
            total = total.merge(t);
            branches.entry(b).or_default().push(m as u32);
        }
        report.absorb(total);
        for (b, ms) in branches {
            if b == "above" {
                report.diag("degrees_above", ms.len());
            } else {
                report.diag(&format!("degrees_{b}"), ms);
            }
        }
        Ok(report.finish())
    }

    /// Zero spacing: gaps bounded by the first gap for `nu >= 1/2`, by `pi` below.
    pub fn check_spacing(&self, nus: &[Order], k_max: u32) -> Result<CheckReport> {
        let report = CheckReport::new("spacing")
            .param("nu", nus.iter().map(|o| o.value()).collect::<Vec<_>>())
            .param("k_max", k_max);
        let per: Vec<(Tally, f64, f64)> = nus
            .par_iter()
            .map(|&nu| -> Result<(Tally, f64, f64)> {
                let j = roots_of(&self.dirichlet_zeros(nu, k_max.max(2))?);
                let mut t = Tally::default();
                let first = j[1] - j[0];
                let (bound, rel) = if nu.value() >= 0.5 {
                    (first, "j[k+1] - j[k] <= j[2] - j[1]")
                } else {
                    (std::f64::consts::PI, "j[k+1] - j[k] <= pi")
                };
                let mut max_gap: f64 = 0.0;
                let mut max_dev_pi: f64 = 0.0;
                for k in 1..j.len() {
                    let gap = j[k] - j[k - 1];
                    max_gap = max_gap.max(gap);
                    max_dev_pi = max_dev_pi.max((gap - std::f64::consts::PI).abs());
                    // slack scaled by the roots, whose uncertainty drives the gap's
                    t.record(ModeIndex::new(0, k as u32), rel, gap, bound, bound - gap >= -SLACK * j[k].max(1.0));
                }
                Ok((t, max_gap, max_dev_pi))
            })
            .collect::<Result<_>>()?;
        let mut report = report;
        let mut gaps = Vec::new();
        let mut devs = Vec::new();
        for (t, g, dv) in per {
            report.absorb(t);
            gaps.push(g);
            devs.push(dv);
        }
        report.diag("max_gap", gaps);
        report.diag("max_abs_gap_minus_pi", devs);
        Ok(report.finish())
    }

    /// Weyl law: `mu_N^{d/2} |B|^2 / (N (2 pi)^d)` against 1.
    pub fn check_weyl(&self, spec: &ProblemSpec, n: u64, tol: f64) -> Result<CheckReport> {
        let d = spec.d();
        let mu = self.nth_eigenvalue(spec, n)?;
        let w = unit_ball_volume(d);
        let ratio = mu.max(0.0).powf(0.5 * f64::from(d)) * w * w
            / (n as f64 * (2.0 * std::f64::consts::PI).powi(d as i32));
        let mut report = CheckReport::new("weyl").param("spec", spec.label()).param("n", n).param("tol", tol);
        let mut t = Tally::default();
        let dev = (ratio - 1.0).abs();
        t.record(ModeIndex::new(0, 0), "|ratio - 1| <= tol", dev, tol, dev <= tol);
        report.absorb(t);
        report.diag("mu_n", mu);
        report.diag("ratio", ratio);
        Ok(report.finish())
    }

    /// `iota / iota_D` inside `band` for every mode whose Robin root exceeds
    /// `threshold`; also the upper and lower sandwich bounds on `iota`.
    pub fn check_index_ratio(
        &self,
        spec: &ProblemSpec,
        modes: &[ModeIndex],
        threshold: f64,
        band: (f64, f64),
    ) -> Result<CheckReport> {
        let sigma = spec.require_robin()?.value();
        let d = spec.d();
        let dir = ProblemSpec::dirichlet(d)?;
        let nonpos = self.nonpositive_lines(spec)?;
        let n_sigma: u64 = nonpos.iter().filter(|l| l.mu < 0.0).map(|l| l.multiplicity).sum();
        if modes.iter().any(|md| md.k == 0) {
            return Err(Error::InvalidSpec("index ratios need k >= 1".into()));
        }
        // roots per degree, marched once up to the largest k needed (+1 for the sandwich)
        let mut by_m: BTreeMap<u32, u32> = BTreeMap::new();
        for md in modes {
            let e = by_m.entry(md.m).or_default();
            *e = (*e).max(md.k);
        }
        let jobs: Vec<(u32, u32)> = by_m.into_iter().collect();
        let roots: BTreeMap<u32, (Vec<f64>, Vec<f64>)> = jobs
            .par_iter()
            .map(|&(m, k)| -> Result<(u32, (Vec<f64>, Vec<f64>))> {
                let x = march_first_k(&self.window, &Branch::of(spec, m)?, k as usize)?;
                let j = march_first_k(&self.window, &Branch::of(&dir, m)?, k as usize + 1)?;
                Ok((m, (x, j)))
            })
            .collect::<Result<_>>()?;
        struct Row {
            mode: ModeIndex,
            root: f64,
            iota: u64,
            iota_d: u64,
            upper: u64,
            lower: Option<i128>,
        }
        let rows: Vec<Row> = modes
            .par_iter()
            .map(|&md| -> Result<Row> {
                let (m, k) = (md.m, md.k);
                let (xs, js) = &roots[&m];
                let b = Branch::of(spec, m)?;
                let x = if b.degenerate && k == 1 {
                    0.0
                } else {
                    crate::spectrum::certify(&self.window, b.nu, b.eq, xs[k as usize - 1], u64::from(k))?.root
                };
                let bd = Branch::dirichlet(spec.order(m));
                let jk = crate::spectrum::certify(&self.window, bd.nu, bd.eq, js[k as usize - 1], u64::from(k))?.root;
                let jk1 = crate::spectrum::certify(&self.window, bd.nu, bd.eq, js[k as usize], u64::from(k) + 1)?.root;
                let iota = self.index_at(spec, &nonpos, m, k, x, IndexMethod::Counting)?;
                let iota_d = self.index_at(&dir, &[], m, k, jk, IndexMethod::Counting)?;
                let iota_d1 = self.index_at(&dir, &[], m, k + 1, jk1, IndexMethod::Counting)?;
                let l_top = (jk1 * jk1 + sigma * sigma).sqrt().floor() as u32;
                let kappa_sum: u64 = (0..=l_top).map(|l| multiplicity(l, d)).sum();
                let upper = n_sigma + kappa_sum + iota_d1;
                let lower = if k > 1 {
                    let jkm1 = crate::spectrum::certify(&self.window, bd.nu, bd.eq, js[k as usize - 2], u64::from(k) - 1)?.root;
                    let iota_dm1 = self.index_at(&dir, &[], m, k - 1, jkm1, IndexMethod::Counting)?;
                    let l_top = (jkm1 - (0.5 * f64::from(d) - 1.0)).max(0.0).floor() as u32;
                    let ks: u64 = (0..=l_top).map(|l| multiplicity(l, d)).sum();
                    Some(i128::from(iota_dm1) - i128::from(ks))
                } else {
                    None
                };
                Ok(Row { mode: md, root: x, iota, iota_d, upper, lower })
            })
            .collect::<Result<_>>()?;
        let mut report = CheckReport::new("index-ratio")
            .param("spec", spec.label())
            .param("modes", modes.len())
            .param("threshold", threshold)
            .param("band", [band.0, band.1]);
        let mut t = Tally::default();
        let mut upper_fail = 0u64;
        let mut lower_fail = 0u64;
        let mut worst_ratio: Option<(f64, ModeIndex)> = None;
        for r in &rows {
            if r.iota > r.upper {
                upper_fail += 1;
            }
            if r.lower.is_some_and(|lo| i128::from(r.iota) < lo) {
                lower_fail += 1;
            }
            if r.root > threshold {
                let ratio = r.iota as f64 / r.iota_d as f64;
                t.record(r.mode, "band.lo <= iota/iota_D", band.0, ratio, ratio >= band.0);
                t.record(r.mode, "iota/iota_D <= band.hi", ratio, band.1, ratio <= band.1);
                let off = (ratio - 1.0).abs();
                if worst_ratio.map_or(true, |(w, _)| off > (w - 1.0).abs()) {
                    worst_ratio = Some((ratio, r.mode));
                }
            }
        }
        report.absorb(t);
        if let Some(last) = rows.last() {
            report.diag("final_mode", last.mode);
            report.diag("final_ratio", last.iota as f64 / last.iota_d as f64);
            report.diag("final_iota", last.iota);
            report.diag("final_iota_d", last.iota_d);
            report.diag("final_upper_bound", last.upper);
        }
        if let Some((w, md)) = worst_ratio {
            report.diag("worst_ratio", w);
            report.diag("worst_ratio_mode", md);
        }
        report.diag("upper_bound_failures", upper_fail);
        report.diag("lower_bound_failures", lower_fail);
        report.diag("n_sigma", n_sigma);
        Ok(report.finish())
    }

    /// Pairs of roots from different degrees closer than `tol`, over
    /// `m <= m_max`, `1 <= k <= k_max`.
    pub fn scan_coincidences(&self, spec: &ProblemSpec, m_max: u32, k_max: u32, tol: f64) -> Result<Vec<CoincidenceHit>> {
        let per_m: Vec<Vec<(f64, ModeIndex)>> = (0..=m_max)
            .into_par_iter()
            .map(|m| -> Result<Vec<(f64, ModeIndex)>> {
                let rs = self.mode_roots(spec, m, k_max)?;
                Ok(rs
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.root > 0.0)
                    .map(|(i, r)| (r.root, ModeIndex::new(m, i as u32 + 1)))
                    .collect())
            })
            .collect::<Result<_>>()?;
        let mut pool: Vec<(f64, ModeIndex)> = per_m.into_iter().flatten().collect();
        pool.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let sigma = spec.sigma().map(|s| s.literal().to_string());
        let mut hits = Vec::new();
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                let gap = pool[j].0 - pool[i].0;
                if gap >= tol {
                    break;
                }
                if pool[i].1.m != pool[j].1.m {
                    hits.push(CoincidenceHit {
                        sigma: sigma.clone(),
                        mode_a: pool[i].1,
                        mode_b: pool[j].1,
                        roots: (pool[i].0, pool[j].0),
                        gap,
                    });
                }
            }
        }
        Ok(hits)
    }

    /// [`Solver::scan_coincidences`] as a report; passes iff no hit.
    pub fn check_coincidences(&self, spec: &ProblemSpec, m_max: u32, k_max: u32, tol: f64) -> Result<CheckReport> {
        let hits = self.scan_coincidences(spec, m_max, k_max, tol)?;
        let mut report = CheckReport::new("coincidences")
            .param("spec", spec.label())
            .param("m_max", m_max)
            .param("k_max", k_max)
            .param("tol", tol);
        let mut t = Tally::default();
        for h in &hits {
            t.record(h.mode_b, &format!("distinct from {}", h.mode_a), tol, h.gap, false);
        }
        report.absorb(t);
        report.diag("hits", hits.len());
        Ok(report.finish())
    }

    /// Power-law exponents of `iota_D` against `j` (expected `d`) and of
    /// `sum_{m <= N} kappa` against `N` (expected `d - 1`).
    pub fn fit_index_asymptotics(&self, d: u32, samples: &[ModeIndex], tol: f64) -> Result<CheckReport> {
        let dir = ProblemSpec::dirichlet(d)?;
        let pts: Vec<(f64, f64)> = samples
            .par_iter()
            .map(|md| -> Result<(f64, f64)> {
                let j = self.mode_root(&dir, md.m, md.k)?.root;
                let iota = self.index_at(&dir, &[], md.m, md.k, j, IndexMethod::Counting)?;
                Ok((j, iota as f64))
            })
            .collect::<Result<_>>()?;
        let span = |v: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = v.fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));
            hi / lo
        };
        let j_span = span(&mut pts.iter().map(|p| p.0));
        if !(j_span >= 10.0) {
            return Err(Error::InsufficientSpan(format!("roots span a factor {j_span:.2}, need 10")));
        }
        let mut ns: Vec<u32> = samples.iter().map(|s| s.m).filter(|&m| m > 0).collect();
        ns.sort_unstable();
        ns.dedup();
        let n_span = span(&mut ns.iter().map(|&n| f64::from(n)));
        if !(n_span >= 10.0) {
            return Err(Error::InsufficientSpan(format!("degrees span a factor {n_span:.2}, need 10")));
        }
        let kappa_pts: Vec<(f64, f64)> = ns
            .iter()
            .map(|&n| (f64::from(n), (1..=n).map(|m| multiplicity(m, d) as f64).sum()))
            .collect();
        let e_iota = fit_exponent(&pts)?;
        let e_kappa = fit_exponent(&kappa_pts)?;
        let df = f64::from(d);
        let mut report = CheckReport::new("asymptotics").param("d", d).param("samples", samples.len()).param("tol", tol);
        let mut t = Tally::default();
        let probe = ModeIndex::new(0, 0);
        t.record(probe, "|exponent(iota_D ~ j) - d| <= tol", (e_iota - df).abs(), tol, (e_iota - df).abs() <= tol);
        t.record(
            probe,
            "|exponent(sum kappa ~ N) - (d-1)| <= tol",
            (e_kappa - df + 1.0).abs(),
            tol,
            (e_kappa - df + 1.0).abs() <= tol,
        );
        report.absorb(t);
        report.diag("iota_exponent", e_iota);
        report.diag("kappa_exponent", e_kappa);
        report.diag("root_span", j_span);
        Ok(report.finish())
    }

    /// `gamma(d) < 1` for `2 <= d <= d_max`.
    pub fn check_gamma(&self, d_max: u32) -> Result<CheckReport> {
        let mut report = CheckReport::new("gamma").param("d_max", d_max);
        let mut t = Tally::default();
        let mut values = BTreeMap::new();
        for d in 2..=d_max {
            let g = self.gamma_d(d)?;
            values.insert(d.to_string(), g);
            t.lt(ModeIndex::new(d, 0), "gamma(d) < 1", g, 1.0);
        }
        report.absorb(t);
        report.diag("gamma", values);
        Ok(report.finish())
    }

    /// For each degree, the `i`-th eigenvalue (negative branch first) increases
    /// with `sigma`. Also checks `x_{nu,k} < j_{nu,k}` whenever `m > -sigma`.
    pub fn check_sigma_monotonicity(&self, d: u32, sigmas: &[Sigma], m_max: u32, k_max: u32) -> Result<CheckReport> {
        let mut sorted = sigmas.to_vec();
        sorted.sort_by(|a, b| a.value().total_cmp(&b.value()));
        let specs: Vec<ProblemSpec> = sorted
            .iter()
            .map(|s| ProblemSpec::new(d, crate::problem::Boundary::Robin(s.clone())))
            .collect::<Result<_>>()?;
        let dir = ProblemSpec::dirichlet(d)?;
        let tallies: Vec<Tally> = (0..=m_max)
            .into_par_iter()
            .map(|m| -> Result<Tally> {
                let j = roots_of(&self.mode_roots(&dir, m, k_max)?);
                let mut t = Tally::default();
                let mut prev: Option<Vec<f64>> = None;
                for spec in &specs {
                    let mut mus = Vec::with_capacity(k_max as usize + 1);
                    if let Some(r) = self.negative_robin_root(spec, m)? {
                        mus.push(-r.root * r.root);
                    }
                    let xs = roots_of(&self.mode_roots(spec, m, k_max)?);
                    let above = f64::from(m) + spec.sigma().map_or(0.0, |s| s.value()) > 0.0;
                    for (i, &x) in xs.iter().enumerate() {
                        mus.push(x * x);
                        if above {
                            t.lt(ModeIndex::new(m, i as u32 + 1), "x[k](sigma) < j[k]", x, j[i]);
                        }
                    }
                    mus.truncate(k_max as usize);
                    if let Some(p) = &prev {
                        for (i, (&a, &b)) in p.iter().zip(&mus).enumerate() {
                            t.lt(ModeIndex::new(m, i as u32 + 1), "mu_i(sigma1) < mu_i(sigma2)", a, b);
                        }
                    }
                    prev = Some(mus);
                }
                Ok(t)
            })
            .collect::<Result<_>>()?;
        let mut report = CheckReport::new("monotonicity")
            .param("d", d)
            .param("sigma", sorted.iter().map(|s| s.literal().to_string()).collect::<Vec<_>>())
            .param("m_max", m_max)
            .param("k_max", k_max);
        for t in tallies {
            report.absorb(t);
        }
        Ok(report.finish())
    }

    /// `|x_{nu,k}(sigma) - j_{nu,k}| <= tol` for large `sigma`.
    pub fn check_dirichlet_limit(&self, spec: &ProblemSpec, m_max: u32, k_max: u32, tol: f64) -> Result<CheckReport> {
        spec.require_robin()?;
        let dir = ProblemSpec::dirichlet(spec.d())?;
        let tallies: Vec<Tally> = (0..=m_max)
            .into_par_iter()
            .map(|m| -> Result<Tally> {
                let j = roots_of(&self.mode_roots(&dir, m, k_max)?);
                let x = roots_of(&self.mode_roots(spec, m, k_max)?);
                let mut t = Tally::default();
                for (i, (&a, &b)) in x.iter().zip(&j).enumerate() {
                    let dev = (a - b).abs();
                    t.record(ModeIndex::new(m, i as u32 + 1), "|x[k] - j[k]| <= tol", dev, tol, dev <= tol);
                }
                Ok(t)
            })
            .collect::<Result<_>>()?;
        let mut report = CheckReport::new("dirichlet-limit")
            .param("spec", spec.label())
            .param("m_max", m_max)
            .param("k_max", k_max)
            .param("tol", tol);
        for t in tallies {
            report.absorb(t);
        }
        Ok(report.finish())
    }
}
