//! Minimal worst-case errors and information complexity `n(eps, S_d)` under
//! the absolute and normalised criteria, with the trace-based upper bound and
//! the polynomial / quasi-polynomial functionals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::products::{
    count_products_above, count_products_above_parallel, product_eigenvalues_top, trace_sum_ln,
    ProductProblem, ENUMERATION_CAP,
};
use crate::spectra::{Criterion, FamilySpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityQuery {
    pub epsilon: f64,
    pub d: usize,
    pub criterion: Criterion,
}

impl ComplexityQuery {
    pub fn new(epsilon: f64, d: usize, criterion: Criterion) -> Result<Self> {
        check_epsilon(epsilon)?;
        if d == 0 {
            return Err(Error::Domain("d must be at least 1".into()));
        }
        Ok(ComplexityQuery {
            epsilon,
            d,
            criterion,
        })
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityResult {
    pub epsilon: f64,
    pub d: usize,
    pub criterion: Criterion,
    pub n: u64,
    pub saturated: bool,
    /// `eps^2 CRI_d^2`; may underflow to zero for NOR at large `d`.
    pub threshold: f64,
}

/// `e(n, S_d) = sqrt(lambda_{d, n+1})`.
pub fn minimal_error(problem: &ProductProblem, n: u64) -> Result<f64> {
    let m = n.checked_add(1).filter(|&m| m <= ENUMERATION_CAP as u64).ok_or(Error::Cap {
        requested: n.saturating_add(1),
        cap: ENUMERATION_CAP as u64,
    })?;
    let top = product_eigenvalues_top(problem, m as usize)?;
    Ok(top[top.len() - 1].sqrt())
}

/// `n(eps, S_d) = #{j : lambda_{d,j} > eps^2 CRI_d^2}`.
///
/// NOR counts on the per-factor normalised spectrum against `eps^2`, which
/// is the same set as raw products above `eps^2 lambda_{d,1}`. The
/// criterion is not checked against a family here; see
/// [`info_complexity_for_family`].
pub fn info_complexity(
    problem: &ProductProblem,
    query: &ComplexityQuery,
    cap: u64,
) -> Result<ComplexityResult> {
    run(problem, query, cap, false)
}

/// [`info_complexity`] with the count split across threads.
pub fn info_complexity_parallel(
    problem: &ProductProblem,
    query: &ComplexityQuery,
    cap: u64,
) -> Result<ComplexityResult> {
    run(problem, query, cap, true)
}

fn run(
    problem: &ProductProblem,
    query: &ComplexityQuery,
    cap: u64,
    parallel: bool,
) -> Result<ComplexityResult> {
    check_epsilon(query.epsilon)?;
    if query.d != problem.d() {
        return Err(Error::Domain(format!(
            "query asks for d = {} but the problem has d = {}",
            query.d,
            problem.d()
        )));
    }
    let eps2 = query.epsilon * query.epsilon;
    let count = |p: &ProductProblem| {
        if parallel {
            count_products_above_parallel(p, eps2, cap)
        } else {
            count_products_above(p, eps2, cap)
        }
    };
    let (c, threshold) = match query.criterion {
        Criterion::Abs => (count(problem)?, eps2),
        Criterion::Nor => (
            count(&problem.normalized())?,
            (eps2.ln() + problem.ln_leading()).exp(),
        ),
    };
    Ok(ComplexityResult {
        epsilon: query.epsilon,
        d: query.d,
        criterion: query.criterion,
        n: c.count,
        saturated: c.saturated,
        threshold,
    })
}

/// [`info_complexity`] for dimensions `1..=d` of a family, refusing
/// criteria the family does not support.
pub fn info_complexity_for_family(
    spec: &FamilySpec,
    query: &ComplexityQuery,
    cap: u64,
) -> Result<ComplexityResult> {
    if !spec.criterion_support().contains(query.criterion) {
        return Err(Error::UnsupportedCriterion {
            family: spec.family().name(),
            criterion: query.criterion,
        });
    }
    let problem = ProductProblem::from_family(spec, query.d)?;
    info_complexity_parallel(&problem, query, cap)
}

/// `ceil(eps^(-2 tau) sum_j (lambda_{d,j} / lambda_{d,1})^tau)`, an upper
/// bound on the NOR complexity.
pub fn lemma_bound(problem: &ProductProblem, epsilon: f64, tau: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    let ln = trace_sum_ln(&problem.normalized(), tau, 1e-12)? - 2.0 * tau * epsilon.ln();
    if ln >= (u64::MAX as f64).ln() {
        return Err(Error::Overflow(format!("bound e^{ln} exceeds u64")));
    }
    Ok(ln.exp().ceil() as u64)
}

/// Normalised per-factor power sums `sum_j (lambda(k,j) / lambda(k,1))^tau`, `k = 1..=d`.
fn normalized_sums(spec: &FamilySpec, tau: f64, d: usize) -> Result<Vec<f64>> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    (1..=d)
        .map(|k| {
            let f = spec.exact_factor(k)?;
            f.law.normalized_power_sum(k, tau)
        })
        .collect()
}

/// `d -> (sum_j (lambda_{d,j} / lambda_{d,1})^tau)^(1/tau) d^(-q)` for `d = 1..=max_d`.
pub fn pt_functional(spec: &FamilySpec, tau: f64, q: f64, max_d: usize) -> Result<Vec<f64>> {
    let sums = normalized_sums(spec, tau, max_d)?;
    let mut ln_acc = 0.0;
    Ok(sums
        .iter()
        .enumerate()
        .map(|(i, s)| {
            ln_acc += s.ln();
            (ln_acc / tau - q * ((i + 1) as f64).ln()).exp()
        })
        .collect())
}

/// `d -> (sum_j (lambda_{d,j} / lambda_{d,1})^(tau (1 + ln d)))^(1/tau) d^(-2)`.
pub fn qpt_functional(spec: &FamilySpec, tau: f64, max_d: usize) -> Result<Vec<f64>> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    let factors = (1..=max_d)
        .map(|k| spec.exact_factor(k))
        .collect::<Result<Vec<_>>>()?;
    (1..=max_d)
        .map(|d| {
            let df = d as f64;
            let e = tau * (1.0 + df.ln());
            let mut ln = 0.0;
            for f in &factors[..d] {
                ln += f.law.normalized_power_sum(f.index, e)?.ln();
            }
            Ok((ln / tau - 2.0 * df.ln()).exp())
        })
        .collect()
}
