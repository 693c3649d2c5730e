//! Independent reference values: direct summation of factor spectra with
//! integral remainders, and brute-force trace sums over index boxes.
//!
//! Nothing here calls the zeta-based closed forms, so agreement with
//! [`FactorSpectrum::tail_sum`] and [`crate::products::trace_sum`] is a real
//! cross-check.

use crate::error::{Error, Result};
use crate::products::{ProductProblem, ORACLE_LIMIT};
use crate::spectra::{FactorLaw, FactorSpectrum, TailModel};

/// Direct terms summed before switching to the integral remainder.
const DIRECT_TERMS: u64 = 200_000;
const MAX_TERMS: u64 = 50_000_000;

/// Compensated (Neumaier) sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn sum_until_negligible(from: u64, term: impl Fn(u64) -> f64) -> Result<f64> {
    let mut acc = Neumaier::default();
    let mut j = from;
    loop {
        let t = term(j);
        acc.add(t);
        if t <= 1e-20 * acc.value() || t == 0.0 {
            return Ok(acc.value());
        }
        j += 1;
        if j - from > MAX_TERMS {
            return Err(Error::Overflow(format!(
                "direct summation did not settle within {MAX_TERMS} terms"
            )));
        }
    }
}

fn sum_range(from: u64, to: u64, term: impl Fn(u64) -> f64) -> f64 {
    let mut acc = Neumaier::default();
    for j in (from..=to).rev() {
        acc.add(term(j));
    }
    acc.value()
}

/// `sum_{j >= from} lambda(j)^tau` by direct summation; power-law tails
/// are finished with the midpoint-rule integral.
pub fn direct_power_sum_from(factor: &FactorSpectrum, tau: f64, from: u64) -> Result<f64> {
    let from = from.max(1);
    let k = factor.index;
    let term = |j: u64| factor.eigenvalue(j).powf(tau);
    let scale_tau = factor.scale.powf(tau);
    let lead_norm = if factor.normalized {
        factor.law.leading().powf(-tau)
    } else {
        1.0
    };
    match factor.law {
        FactorLaw::Euler { exponent } => {
            let s = exponent * tau;
            if s <= 1.0 {
                return Err(Error::Divergent { k });
            }
            let n = from + DIRECT_TERMS;
            let head = sum_range(from, n, term);
            // int_{n + 1/2}^inf (pi (x - 1/2))^-s dx
            let rem = std::f64::consts::PI.powf(-s) * (n as f64).powf(1.0 - s) / (s - 1.0);
            Ok(head + scale_tau * lead_norm * rem)
        }
        FactorLaw::Korobov { r, g } => {
            let s = 2.0 * r * tau;
            if s <= 1.0 {
                return Err(Error::Divergent { k });
            }
            // finish on a complete pair (2M, 2M + 1)
            let m_last = (from + DIRECT_TERMS) / 2;
            let head = sum_range(from, 2 * m_last + 1, term);
            let rem = 2.0 * g.powf(tau) * (m_last as f64 + 0.5).powf(1.0 - s) / (s - 1.0);
            Ok(head + scale_tau * rem)
        }
        FactorLaw::Gaussian { .. } | FactorLaw::AnalyticKorobov { .. } => {
            sum_until_negligible(from, term)
        }
        FactorLaw::Tabulated { ref values, tail } => {
            let l = values.len() as u64;
            let inside = if from <= l { sum_range(from, l, term) } else { 0.0 };
            let start = from.max(l + 1);
            let beyond = match tail {
                None => return Err(Error::NoTailModel { k }),
                Some(TailModel::Geometric { .. }) => sum_until_negligible(start, term)?,
                Some(TailModel::Power { exponent }) => {
                    let s = exponent * tau;
                    if s <= 1.0 {
                        return Err(Error::Divergent { k });
                    }
                    let n = start + DIRECT_TERMS;
                    let head = sum_range(start, n, term);
                    let last = factor.eigenvalue(l).powf(tau);
                    let rem = last * (l as f64).powf(s) * (n as f64 + 0.5).powf(1.0 - s) / (s - 1.0);
                    head + rem
                }
            };
            Ok(inside + beyond)
        }
    }
}

/// `H(tau) = sum_{j >= 2} (lambda(j) / lambda(2))^tau` by direct summation.
pub fn direct_tail_sum(factor: &FactorSpectrum, tau: f64) -> Result<f64> {
    let second = factor.eigenvalue(2);
    Ok(direct_power_sum_from(factor, tau, 2)? / second.powf(tau))
}

/// Brute-force `sum_j lambda_{d,j}^tau`: every product over the box
/// `j_k <= J`, plus the part of `prod_k (S_k + T_k)` outside the box, where
/// `S_k` and `T_k` are the direct in-box and out-of-box factor sums.
pub fn brute_force_trace(problem: &ProductProblem, tau: f64, per_dim: u64) -> Result<f64> {
    let d = problem.d();
    let total = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(per_dim).filter(|&n| n <= ORACLE_LIMIT));
    if total.is_none() || per_dim == 0 {
        return Err(Error::Cap {
            requested: per_dim.saturating_pow(d as u32),
            cap: ORACLE_LIMIT,
        });
    }
    let tables: Vec<Vec<f64>> = problem
        .factors()
        .iter()
        .map(|f| (1..=per_dim).map(|j| f.eigenvalue(j).powf(tau)).collect())
        .collect();
    let mut box_sum = Neumaier::default();
    let mut idx = vec![0usize; d];
    'outer: loop {
        let mut p = tables[0][idx[0]];
        for k in 1..d {
            p *= tables[k][idx[k]];
        }
        box_sum.add(p);
        let mut k = d;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_dim as usize {
                break;
            }
            idx[k] = 0;
        }
    }
    let mut inside = 1.0;
    let mut whole = 1.0;
    for (f, t) in problem.factors().iter().zip(&tables) {
        let s = sum_range(1, per_dim, |j| t[(j - 1) as usize]);
        let tail = direct_power_sum_from(f, tau, per_dim + 1)?;
        inside *= s;
        whole *= s + tail;
    }
    Ok(box_sum.value() + (whole - inside))
}
