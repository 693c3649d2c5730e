//! The d-variate product spectrum `{prod_k lambda(k, j_k)}`: best-first top-m
//! enumeration, threshold counting, trace sums and a brute-force oracle.
//!
//! Products are multiplied in dimension order `k = 1..d` everywhere, so the
//! search, the counter and the oracle produce bit-identical doubles. Above
//! [`LOG_SPACE_DIM`] dimensions (or when values would underflow) the search
//! and the counter work with sums of logarithms instead.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{FactorSpectrum, FamilySpec};

pub const ENUMERATION_CAP: usize = 10_000_000;
pub const COUNTING_CAP: u64 = 100_000_000;
pub const ORACLE_LIMIT: u64 = 10_000_000;
pub const LOG_SPACE_DIM: usize = 30;

/// Factor tables longer than this are evaluated on demand.
const TABLE_LIMIT: u64 = 1 << 22;
/// Relative slack on inner-level pruning; leaves compare exactly.
const PRUNE_SLACK: f64 = 1e-12;
/// Below this log-magnitude linear products risk underflow.
const LN_UNDERFLOW: f64 = -700.0;

#[derive(Clone, Debug, PartialEq)]
pub struct ProductProblem {
    factors: Vec<FactorSpectrum>,
    /// `suffix_max[k] = prod_{k' >= k} lambda(k', 1)` (0-based), `suffix_max[d] = 1`.
    suffix_max: Vec<f64>,
    ln_suffix_max: Vec<f64>,
}

impl ProductProblem {
    pub fn new(factors: Vec<FactorSpectrum>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Domain("a product problem needs d >= 1 factors".into()));
        }
        for f in &factors {
            let lead = f.leading();
            if !(f.scale > 0.0 && f.scale.is_finite()) || !(lead > 0.0) || !lead.is_finite() {
                return Err(Error::Domain(format!(
                    "factor {} has a nonpositive or non-finite leading eigenvalue",
                    f.index
                )));
            }
        }
        let d = factors.len();
        let mut suffix_max = vec![1.0; d + 1];
        let mut ln_suffix_max = vec![0.0; d + 1];
        for k in (0..d).rev() {
            suffix_max[k] = factors[k].leading() * suffix_max[k + 1];
            ln_suffix_max[k] = factors[k].ln_leading() + ln_suffix_max[k + 1];
        }
        Ok(ProductProblem {
            factors,
            suffix_max,
            ln_suffix_max,
        })
    }

    /// Dimensions `1..=d` of a family; approximate-only factors are refused.
    pub fn from_family(spec: &FamilySpec, d: usize) -> Result<Self> {
        let factors = (1..=d)
            .map(|k| spec.exact_factor(k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    /// Like [`from_family`](Self::from_family) but accepts leading-term
    /// Wiener factors.
    pub fn from_family_approximate(spec: &FamilySpec, d: usize) -> Result<Self> {
        let factors = (1..=d).map(|k| spec.factor(k)).collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn d(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[FactorSpectrum] {
        &self.factors
    }

    pub fn is_approximate(&self) -> bool {
        self.factors.iter().any(|f| f.approximate)
    }

    /// Every factor divided by its own leading value.
    pub fn normalized(&self) -> Self {
        Self::new(self.factors.iter().map(|f| f.normalized()).collect())
            .expect("normalised factors have unit leading values")
    }

    /// Factor `k` multiplied by `c[k]`.
    pub fn scaled(&self, c: &[f64]) -> Result<Self> {
        if c.len() != self.d() {
            return Err(Error::Domain(format!(
                "expected {} scale factors, got {}",
                self.d(),
                c.len()
            )));
        }
        Self::new(self.factors.iter().zip(c).map(|(f, &s)| f.scaled(s)).collect())
    }

    /// Factors reordered so that position `i` holds old factor `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.d()];
        if perm.len() != self.d() || perm.iter().any(|&p| p >= self.d() || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Domain("not a permutation of the factor positions".into()));
        }
        Self::new(perm.iter().map(|&p| self.factors[p].clone()).collect())
    }

    /// `lambda_{d,1} = prod_k lambda(k, 1)`, multiplied in dimension order.
    pub fn leading(&self) -> f64 {
        self.product(&vec![1; self.d()])
    }

    pub fn ln_leading(&self) -> f64 {
        self.ln_suffix_max[0]
    }

    /// `prod_k lambda(k, j_k)` in dimension order.
    pub fn product(&self, index: &[u64]) -> f64 {
        let mut p = self.factors[0].eigenvalue(index[0]);
        for (f, &j) in self.factors.iter().zip(index).skip(1) {
            p *= f.eigenvalue(j);
        }
        p
    }

    pub fn ln_product(&self, index: &[u64]) -> f64 {
        self.factors
            .iter()
            .zip(index)
            .map(|(f, &j)| f.ln_eigenvalue(j))
            .sum()
    }

    fn use_log_space(&self, ln_t: f64) -> bool {
        self.d() > LOG_SPACE_DIM || ln_t < LN_UNDERFLOW || self.ln_leading() < LN_UNDERFLOW
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub count: u64,
    pub saturated: bool,
    pub cap: u64,
}

/// Max-heap entry: larger value first, then lexicographically smaller index.
struct Entry {
    value: f64,
    index: Reverse<Vec<u64>>,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| self.index.cmp(&other.index))
    }
}

/// The `m` largest products with multiplicity, nonincreasing.
pub fn product_eigenvalues_top(problem: &ProductProblem, m: usize) -> Result<Vec<f64>> {
    product_eigenvalues_top_with_cap(problem, m, ENUMERATION_CAP)
}

pub fn product_eigenvalues_top_with_cap(
    problem: &ProductProblem,
    m: usize,
    cap: usize,
) -> Result<Vec<f64>> {
    Ok(top_entries(problem, m, cap)?.into_iter().map(|(v, _)| v).collect())
}

/// Top-m products together with their index tuples, in output order.
pub fn top_entries(
    problem: &ProductProblem,
    m: usize,
    cap: usize,
) -> Result<Vec<(f64, Vec<u64>)>> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    if m > cap {
        return Err(Error::Cap {
            requested: m as u64,
            cap: cap as u64,
        });
    }
    let d = problem.d();
    let log = d > LOG_SPACE_DIM;
    let value = |idx: &[u64]| {
        if log {
            problem.ln_product(idx).exp()
        } else {
            problem.product(idx)
        }
    };
    // ordering key; in log space ties are broken on the log value
    let key = |idx: &[u64]| if log { problem.ln_product(idx) } else { problem.product(idx) };
    let mut heap = BinaryHeap::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let start = vec![1u64; d];
    heap.push(Entry {
        value: key(&start),
        index: Reverse(start.clone()),
    });
    seen.insert(start);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let Some(Entry {
            index: Reverse(idx),
            ..
        }) = heap.pop()
        else {
            return Err(Error::Domain(format!(
                "spectrum has only {} nonzero products, fewer than m = {m}",
                out.len()
            )));
        };
        for k in 0..d {
            let mut next = idx.clone();
            next[k] += 1;
            if seen.contains(&next) {
                continue;
            }
            let v = key(&next);
            let positive = if log { v > f64::NEG_INFINITY } else { v > 0.0 };
            if positive {
                seen.insert(next.clone());
                heap.push(Entry {
                    value: v,
                    index: Reverse(next),
                });
            }
        }
        out.push((value(&idx), idx));
    }
    Ok(out)
}

/// One dimension's candidate eigenvalues for a fixed threshold: either a
/// cached nonincreasing table or on-demand evaluation.
struct Level<'a> {
    factor: &'a FactorSpectrum,
    log: bool,
    len: u64,
    table: Option<Vec<f64>>,
}

impl<'a> Level<'a> {
    fn new(factor: &'a FactorSpectrum, log: bool, ln_cut: f64) -> Self {
        // relaxed: keep every j with ln lambda(j) > ln_cut - slack
        let cut = ln_cut - 1e-9;
        let ok = |j: u64| factor.ln_eigenvalue(j) > cut;
        let len = if !ok(1) {
            0
        } else {
            let mut hi: u64 = 2;
            while ok(hi) && hi < u64::MAX / 4 {
                hi *= 2;
            }
            let mut lo = hi / 2;
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        let table = (len <= TABLE_LIMIT).then(|| {
            (1..=len)
                .map(|j| {
                    if log {
                        factor.ln_eigenvalue(j)
                    } else {
                        factor.eigenvalue(j)
                    }
                })
                .collect()
        });
        Level {
            factor,
            log,
            len,
            table,
        }
    }

    fn get(&self, j: u64) -> f64 {
        match &self.table {
            Some(t) => t[(j - 1) as usize],
            None if self.log => self.factor.ln_eigenvalue(j),
            None => self.factor.eigenvalue(j),
        }
    }

    /// Number of `j <= len` with `above(j)`, for a predicate that holds on a prefix.
    fn prefix_len(&self, above: impl Fn(f64) -> bool) -> u64 {
        match &self.table {
            Some(t) => t.partition_point(|&v| above(v)) as u64,
            None => {
                let (mut lo, mut hi) = (0u64, self.len + 1);
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if above(self.get(mid)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        }
    }
}

struct Counter<'a> {
    problem: &'a ProductProblem,
    levels: Vec<Level<'a>>,
    log: bool,
    t: f64,
    cap: u64,
    total: &'a AtomicU64,
}

impl Counter<'_> {
    fn full(&self) -> bool {
        self.total.load(AtomicOrdering::Relaxed) >= self.cap
    }

    fn add(&self, c: u64) -> bool {
        if c == 0 {
            return self.full();
        }
        self.total.fetch_add(c, AtomicOrdering::Relaxed) + c >= self.cap
    }

    /// Counts the subtree below `prefix` at `depth`; returns true once the cap is hit.
    fn dfs(&self, depth: usize, prefix: f64) -> bool {
        let d = self.levels.len();
        let level = &self.levels[depth];
        let t = self.t;
        if depth == d - 1 {
            let c = if self.log {
                level.prefix_len(|v| prefix + v > t)
            } else if depth == 0 {
                level.prefix_len(|v| v > t)
            } else {
                level.prefix_len(|v| prefix * v > t)
            };
            return self.add(c);
        }
        for j in 1..=level.len {
            let v = self.extend(depth, prefix, level.get(j));
            if !self.reachable(depth + 1, v) {
                break;
            }
            if self.dfs(depth + 1, v) {
                return true;
            }
        }
        self.full()
    }

    fn extend(&self, depth: usize, prefix: f64, v: f64) -> f64 {
        if depth == 0 {
            v
        } else if self.log {
            prefix + v
        } else {
            prefix * v
        }
    }

    fn reachable(&self, next_depth: usize, v: f64) -> bool {
        if self.log {
            v + self.problem.ln_suffix_max[next_depth] > self.t - PRUNE_SLACK
        } else {
            v * self.problem.suffix_max[next_depth] > self.t * (1.0 - PRUNE_SLACK)
        }
    }
}

fn build_counter<'a>(
    problem: &'a ProductProblem,
    ln_t: f64,
    cap: u64,
    total: &'a AtomicU64,
) -> Counter<'a> {
    let log = problem.use_log_space(ln_t);
    let ln_lead = problem.ln_leading();
    let levels = problem
        .factors
        .iter()
        .map(|f| Level::new(f, log, ln_t - (ln_lead - f.ln_leading())))
        .collect();
    Counter {
        problem,
        levels,
        log,
        t: if log { ln_t } else { ln_t.exp() },
        cap,
        total,
    }
}

fn check_threshold(t: f64, cap: u64) -> Result<()> {
    if !(t > 0.0) || t.is_nan() {
        return Err(Error::Domain(format!(
            "threshold must be positive (the count is infinite at T = {t})"
        )));
    }
    if cap == 0 {
        return Err(Error::Domain("cap must be positive".into()));
    }
    Ok(())
}

fn finish(total: &AtomicU64, cap: u64) -> CountResult {
    let n = total.load(AtomicOrdering::Relaxed);
    if n >= cap {
        CountResult {
            count: cap,
            saturated: true,
            cap,
        }
    } else {
        CountResult {
            count: n,
            saturated: false,
            cap,
        }
    }
}

/// `#{(j_1..j_d) : prod_k lambda(k, j_k) > T}` by pruned depth-first search.
/// Reaching `cap` stops the search and reports `count = cap, saturated`.
pub fn count_products_above(problem: &ProductProblem, t: f64, cap: u64) -> Result<CountResult> {
    check_threshold(t, cap)?;
    count_linear_or_log(problem, t, t.ln(), cap)
}

/// As [`count_products_above`] with the threshold given as `ln T`.
pub fn count_products_above_ln(problem: &ProductProblem, ln_t: f64, cap: u64) -> Result<CountResult> {
    if ln_t.is_nan() || ln_t == f64::NEG_INFINITY {
        return Err(Error::Domain("threshold must be positive".into()));
    }
    check_threshold(1.0, cap)?;
    count_linear_or_log(problem, ln_t.exp(), ln_t, cap)
}

fn count_linear_or_log(problem: &ProductProblem, t: f64, ln_t: f64, cap: u64) -> Result<CountResult> {
    let total = AtomicU64::new(0);
    let log = problem.use_log_space(ln_t);
    // the linear threshold must be exactly the caller's T for bit-exact leaves
    let mut counter = build_counter(problem, ln_t, cap, &total);
    if !log {
        counter.t = t;
    }
    counter.dfs(0, 0.0);
    Ok(finish(&total, cap))
}

/// Parallel over first-coordinate subtrees; the result equals the sequential count.
pub fn count_products_above_parallel(
    problem: &ProductProblem,
    t: f64,
    cap: u64,
) -> Result<CountResult> {
    check_threshold(t, cap)?;
    if problem.d() == 1 {
        return count_products_above(problem, t, cap);
    }
    let ln_t = t.ln();
    let total = AtomicU64::new(0);
    let mut counter = build_counter(problem, ln_t, cap, &total);
    if !counter.log {
        counter.t = t;
    }
    let n1 = counter.levels[0].len;
    let counter = &counter;
    (1..=n1).into_par_iter().try_for_each(|j| {
        if counter.full() {
            return Err(());
        }
        let v = counter.levels[0].get(j);
        if !counter.reachable(1, v) || counter.dfs(1, v) {
            return Err(());
        }
        Ok(())
    }).ok();
    Ok(finish(&total, cap))
}

/// `sum_j lambda_{d,j}^tau = prod_k sum_j lambda(k, j)^tau`.
pub fn trace_sum(problem: &ProductProblem, tau: f64, tol: f64) -> Result<f64> {
    check_trace_args(problem, tau, tol)?;
    let mut p = 1.0;
    for f in &problem.factors {
        p *= f.power_sum(tau)?;
    }
    if !p.is_finite() || p == 0.0 {
        return Err(Error::Overflow(format!(
            "trace sum leaves the double range; use the log form (ln = {})",
            trace_sum_ln(problem, tau, tol)?
        )));
    }
    Ok(p)
}

/// `ln` of [`trace_sum`], safe for large `d`.
pub fn trace_sum_ln(problem: &ProductProblem, tau: f64, tol: f64) -> Result<f64> {
    check_trace_args(problem, tau, tol)?;
    problem.factors.iter().map(|f| f.ln_power_sum(tau)).sum()
}

fn check_trace_args(problem: &ProductProblem, tau: f64, tol: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    // closed forms are accurate to a few ulps per factor
    if tol < 1e-14 * problem.d() as f64 {
        return Err(Error::Domain(format!(
            "tolerance {tol:e} is below the attainable {:e}",
            1e-14 * problem.d() as f64
        )));
    }
    if let Some(f) = problem.factors.iter().find(|f| f.approximate) {
        return Err(Error::ApproximateOnly {
            k: f.index,
            leading: f.leading(),
        });
    }
    Ok(())
}

/// Every product over `j_k <= J`, sorted nonincreasing.
///
/// Exact as a count for thresholds above [`oracle_validity_threshold`].
pub fn brute_force_oracle(problem: &ProductProblem, per_dim: u64) -> Result<Vec<f64>> {
    let d = problem.d();
    if per_dim == 0 {
        return Err(Error::Domain("per-dimension cap must be at least 1".into()));
    }
    let total = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(per_dim).filter(|&n| n <= ORACLE_LIMIT));
    let Some(total) = total else {
        return Err(Error::Cap {
            requested: per_dim.saturating_pow(d as u32),
            cap: ORACLE_LIMIT,
        });
    };
    let tables: Vec<Vec<f64>> = problem
        .factors
        .iter()
        .map(|f| (1..=per_dim).map(|j| f.eigenvalue(j)).collect())
        .collect();
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; d];
    loop {
        let mut p = tables[0][idx[0]];
        for k in 1..d {
            p *= tables[k][idx[k]];
        }
        out.push(p);
        let mut k = d;
        loop {
            if k == 0 {
                out.sort_unstable_by(|a, b| b.total_cmp(a));
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_dim as usize {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `max_k lambda(k, J) prod_{k' != k} lambda(k', 1)`: oracle counts are exact
/// for thresholds strictly above this value.
pub fn oracle_validity_threshold(problem: &ProductProblem, per_dim: u64) -> f64 {
    let ln_lead = problem.ln_leading();
    problem
        .factors
        .iter()
        .map(|f| (f.ln_eigenvalue(per_dim) + ln_lead - f.ln_leading()).exp())
        .fold(0.0, f64::max)
}

/// Number of oracle entries strictly above `t`.
pub fn oracle_count(sorted_desc: &[f64], t: f64) -> u64 {
    sorted_desc.partition_point(|&v| v > t) as u64
}
