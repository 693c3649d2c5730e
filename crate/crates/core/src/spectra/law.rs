//! Univariate eigenvalue laws `j -> lambda(k, j)` for a fixed dimension `k`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::special::{hurwitz_zeta, riemann_zeta, stretched_exp_tail_bound};

/// Relative accuracy targeted by the series-valued tail sums.
pub const TAIL_SUM_RTOL: f64 = 1e-14;

const MAX_SERIES_TERMS: u64 = 100_000_000;

/// Extrapolation rule for eigenvalues beyond a tabulated prefix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailModel {
    /// `lambda_j = lambda_L * ratio^(j - L)` with `0 < ratio < 1`.
    Geometric { ratio: f64 },
    /// `lambda_j = lambda_L * (j / L)^(-exponent)` with `exponent > 0`.
    Power { exponent: f64 },
}

impl TailModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TailModel::Geometric { ratio } if !(ratio > 0.0 && ratio < 1.0) => Err(
                Error::InvalidSpec(format!("geometric tail ratio must lie in (0, 1), got {ratio}")),
            ),
            TailModel::Power { exponent } if !(exponent > 0.0 && exponent.is_finite()) => {
                Err(Error::InvalidSpec(format!(
                    "power tail exponent must be positive, got {exponent}"
                )))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FactorLaw {
    /// `(pi (j - 1/2))^(-exponent)`; Euler kernels and the Wiener leading term.
    Euler { exponent: f64 },
    /// `1` at `j = 1`, then `g * m^(-2r)` on the pair `j = 2m, 2m + 1`.
    Korobov { r: f64, g: f64 },
    /// `(1 - omega) omega^(j - 1)`.
    Gaussian { omega: f64 },
    /// `1` at `j = 1`, then `omega^(a m^b)` on the pair `j = 2m, 2m + 1`.
    AnalyticKorobov { omega: f64, a: f64, b: f64 },
    /// Listed values, extrapolated by `tail`; without a tail model the
    /// spectrum is finite (zero past the table).
    Tabulated {
        values: Arc<[f64]>,
        tail: Option<TailModel>,
    },
}

impl FactorLaw {
    /// `lambda(j)` for `j >= 1`.
    pub fn value(&self, j: u64) -> f64 {
        debug_assert!(j >= 1);
        match *self {
            FactorLaw::Euler { exponent } => (PI * (j as f64 - 0.5)).powf(-exponent),
            FactorLaw::Korobov { r, g } => {
                if j == 1 {
                    1.0
                } else {
                    g * ((j / 2) as f64).powf(-2.0 * r)
                }
            }
            FactorLaw::Gaussian { omega } => (1.0 - omega) * omega.powf((j - 1) as f64),
            FactorLaw::AnalyticKorobov { omega, a, b } => {
                if j == 1 {
                    1.0
                } else {
                    omega.powf(a * ((j / 2) as f64).powf(b))
                }
            }
            FactorLaw::Tabulated { ref values, tail } => tabulated_value(values, tail, j),
        }
    }

    /// `ln lambda(j)`, finite even where `value` underflows.
    pub fn ln_value(&self, j: u64) -> f64 {
        match *self {
            FactorLaw::Euler { exponent } => -exponent * (PI * (j as f64 - 0.5)).ln(),
            FactorLaw::Korobov { r, g } => {
                if j == 1 {
                    0.0
                } else {
                    g.ln() - 2.0 * r * ((j / 2) as f64).ln()
                }
            }
            FactorLaw::Gaussian { omega } => (-omega).ln_1p() + (j - 1) as f64 * omega.ln(),
            FactorLaw::AnalyticKorobov { omega, a, b } => {
                if j == 1 {
                    0.0
                } else {
                    a * ((j / 2) as f64).powf(b) * omega.ln()
                }
            }
            FactorLaw::Tabulated { ref values, tail } => {
                let l = values.len() as u64;
                if j <= l {
                    return values[(j - 1) as usize].ln();
                }
                let last = values[values.len() - 1].ln();
                match tail {
                    Some(TailModel::Geometric { ratio }) => last + (j - l) as f64 * ratio.ln(),
                    Some(TailModel::Power { exponent }) => {
                        last - exponent * (j as f64 / l as f64).ln()
                    }
                    None => f64::NEG_INFINITY,
                }
            }
        }
    }

    /// `lambda(j) / lambda(1)` from the closed form.
    pub fn ratio(&self, j: u64) -> f64 {
        match *self {
            FactorLaw::Euler { exponent } => (2.0 * j as f64 - 1.0).powf(-exponent),
            FactorLaw::Gaussian { omega } => omega.powf((j - 1) as f64),
            FactorLaw::Korobov { .. } | FactorLaw::AnalyticKorobov { .. } => self.value(j),
            FactorLaw::Tabulated { ref values, tail } => {
                if j == 1 {
                    1.0
                } else {
                    tabulated_value(values, tail, j) / values[0]
                }
            }
        }
    }

    pub fn ln_ratio(&self, j: u64) -> f64 {
        match *self {
            FactorLaw::Euler { exponent } => -exponent * (2.0 * j as f64 - 1.0).ln(),
            FactorLaw::Gaussian { omega } => (j - 1) as f64 * omega.ln(),
            _ => self.ln_value(j) - self.ln_value(1),
        }
    }

    pub fn leading(&self) -> f64 {
        self.value(1)
    }

    /// `h = lambda(2) / lambda(1)`.
    pub fn second_ratio(&self) -> f64 {
        match *self {
            FactorLaw::Euler { exponent } => 3f64.powf(-exponent),
            FactorLaw::Korobov { g, .. } => g,
            FactorLaw::Gaussian { omega } => omega,
            FactorLaw::AnalyticKorobov { omega, a, .. } => omega.powf(a),
            FactorLaw::Tabulated { .. } => self.ratio(2),
        }
    }

    /// `H(tau) = sum_{j>=2} (lambda(j) / lambda(2))^tau`, `+inf` on divergence.
    pub fn tail_sum(&self, k: usize, tau: f64) -> Result<ExtendedReal> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("tau must be positive, got {tau}")));
        }
        match *self {
            FactorLaw::Euler { exponent } => {
                let s = tau * exponent;
                if s <= 1.0 {
                    return Ok(ExtendedReal::INFINITY);
                }
                // (3/2)^s zeta(s, 3/2)
                Ok(ExtendedReal::finite(1.5f64.powf(s) * hurwitz_zeta(s, 1.5)?))
            }
            FactorLaw::Korobov { r, .. } => {
                let s = 2.0 * r * tau;
                if s <= 1.0 {
                    return Ok(ExtendedReal::INFINITY);
                }
                Ok(ExtendedReal::finite(2.0 * riemann_zeta(s)?))
            }
            FactorLaw::Gaussian { omega } => {
                Ok(ExtendedReal::finite(1.0 / -(tau * omega.ln()).exp_m1()))
            }
            FactorLaw::AnalyticKorobov { omega, a, b } => {
                let c = tau * a * -omega.ln();
                Ok(ExtendedReal::finite(2.0 * stretched_series(c, b)?))
            }
            FactorLaw::Tabulated { ref values, tail } => {
                let Some(tail) = tail else {
                    return Err(Error::NoTailModel { k });
                };
                let l = values.len() as u64;
                let second = tabulated_value(values, Some(tail), 2);
                let mut sum = 0.0;
                for j in (2..=l).rev() {
                    sum += (values[(j - 1) as usize] / second).powf(tau);
                }
                let last = (values[values.len() - 1] / second).powf(tau);
                let beyond = match tail {
                    TailModel::Geometric { ratio } => {
                        let q = ratio.powf(tau);
                        last * q / (1.0 - q)
                    }
                    TailModel::Power { exponent } => {
                        let s = exponent * tau;
                        if s <= 1.0 {
                            return Ok(ExtendedReal::INFINITY);
                        }
                        last * (l as f64).powf(s) * hurwitz_zeta(s, (l + 1) as f64)?
                    }
                };
                Ok(ExtendedReal::finite(sum + beyond))
            }
        }
    }

    /// Analytic upper bound on `sum_{j>J} (lambda(j) / lambda(2))^tau`.
    /// May be `+inf` when no bound is available at this `J`.
    pub fn tail_bound(&self, j_cut: u64, tau: f64) -> f64 {
        let jf = j_cut as f64;
        match *self {
            FactorLaw::Euler { exponent } => {
                let s = tau * exponent;
                3f64.powf(s) * (2.0 * jf - 1.0).powf(1.0 - s) / (2.0 * (s - 1.0))
            }
            FactorLaw::Korobov { r, .. } => {
                let s = 2.0 * r * tau;
                let zeta_tail = |m: f64| m.powf(-s) + m.powf(1.0 - s) / (s - 1.0);
                paired_tail(j_cut, |m| (m as f64).powf(-s), |m| zeta_tail(m as f64))
            }
            FactorLaw::Gaussian { omega } => {
                let q = omega.powf(tau);
                q.powf(jf - 1.0) / (1.0 - q)
            }
            FactorLaw::AnalyticKorobov { omega, a, b } => {
                let c = tau * a * -omega.ln();
                let term = |m: u64| (-c * ((m as f64).powf(b) - 1.0)).exp();
                paired_tail(j_cut, term, |m| {
                    term(m) + c.exp() * stretched_exp_tail_bound(c, b, m as f64)
                })
            }
            FactorLaw::Tabulated { ref values, tail } => {
                let Some(tail) = tail else {
                    return f64::INFINITY;
                };
                let l = values.len() as u64;
                let second = tabulated_value(values, Some(tail), 2);
                let mut inside = 0.0;
                for j in (j_cut + 1..=l).rev() {
                    inside += (values[(j - 1) as usize] / second).powf(tau);
                }
                let last = (values[values.len() - 1] / second).powf(tau);
                let from = j_cut.max(l);
                let beyond = match tail {
                    TailModel::Geometric { ratio } => {
                        let q = ratio.powf(tau);
                        last * q.powf((from - l + 1) as f64) / (1.0 - q)
                    }
                    TailModel::Power { exponent } => {
                        let s = exponent * tau;
                        if s <= 1.0 {
                            return f64::INFINITY;
                        }
                        let lf = l as f64;
                        let ff = from as f64;
                        last * lf.powf(s) * ((ff + 1.0).powf(-s) + (ff + 1.0).powf(1.0 - s) / (s - 1.0))
                    }
                };
                inside + beyond
            }
        }
    }

    /// `sum_j lambda(j)^tau / lambda(1)^tau = 1 + h^tau H(tau)`.
    pub fn normalized_power_sum(&self, k: usize, tau: f64) -> Result<f64> {
        let h = self.tail_sum(k, tau)?;
        if h.is_infinite() {
            return Err(Error::Divergent { k });
        }
        Ok(1.0 + self.second_ratio().powf(tau) * h.value())
    }
}

fn tabulated_value(values: &[f64], tail: Option<TailModel>, j: u64) -> f64 {
    let l = values.len() as u64;
    if j <= l {
        return values[(j - 1) as usize];
    }
    let last = values[values.len() - 1];
    match tail {
        Some(TailModel::Geometric { ratio }) => last * ratio.powf((j - l) as f64),
        Some(TailModel::Power { exponent }) => last * (j as f64 / l as f64).powf(-exponent),
        None => 0.0,
    }
}

/// Tail past index `j_cut` of a paired sequence `j = 2m, 2m + 1 -> t(m)`,
/// given `t` and an upper bound `rest(M) >= sum_{m>=M} t(m)`.
fn paired_tail(j_cut: u64, t: impl Fn(u64) -> f64, rest: impl Fn(u64) -> f64) -> f64 {
    let m0 = j_cut / 2;
    if j_cut < 2 {
        return f64::INFINITY;
    }
    let partner = if j_cut.is_multiple_of(2) { t(m0) } else { 0.0 };
    partner + 2.0 * rest(m0 + 1)
}

/// `sum_{m>=1} exp(-c (m^b - 1))` to relative accuracy `TAIL_SUM_RTOL`.
fn stretched_series(c: f64, b: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut m: u64 = 1;
    loop {
        sum += (-c * ((m as f64).powf(b) - 1.0)).exp();
        if m.is_multiple_of(16) || m < 16 {
            let bound = c.exp() * stretched_exp_tail_bound(c, b, m as f64);
            if bound < TAIL_SUM_RTOL * sum {
                return Ok(sum);
            }
        }
        m += 1;
        if m > MAX_SERIES_TERMS {
            return Err(Error::Overflow(format!(
                "series with c = {c}, b = {b} needs more than {MAX_SERIES_TERMS} terms"
            )));
        }
    }
}

/// One dimension's spectrum: a law, an optional positive scale and a
/// normalisation switch (`lambda(1) = 1` exactly when normalised).
#[derive(Clone, Debug, PartialEq)]
pub struct FactorSpectrum {
    pub index: usize,
    pub law: FactorLaw,
    pub scale: f64,
    pub normalized: bool,
    /// Only the leading asymptotic term is known.
    pub approximate: bool,
    pub tolerance: f64,
}

impl FactorSpectrum {
    pub fn new(index: usize, law: FactorLaw) -> Self {
        FactorSpectrum {
            index,
            law,
            scale: 1.0,
            normalized: false,
            approximate: false,
            tolerance: 1e-12,
        }
    }

    pub fn eigenvalue(&self, j: u64) -> f64 {
        let base = if self.normalized {
            self.law.ratio(j)
        } else {
            self.law.value(j)
        };
        if self.scale == 1.0 {
            base
        } else {
            self.scale * base
        }
    }

    pub fn ln_eigenvalue(&self, j: u64) -> f64 {
        let base = if self.normalized {
            self.law.ln_ratio(j)
        } else {
            self.law.ln_value(j)
        };
        base + self.scale.ln()
    }

    pub fn leading(&self) -> f64 {
        self.eigenvalue(1)
    }

    pub fn ln_leading(&self) -> f64 {
        self.ln_eigenvalue(1)
    }

    pub fn second_ratio(&self) -> f64 {
        self.law.second_ratio()
    }

    pub fn tail_sum(&self, tau: f64) -> Result<ExtendedReal> {
        self.law.tail_sum(self.index, tau)
    }

    /// `ln sum_j lambda(j)^tau`.
    pub fn ln_power_sum(&self, tau: f64) -> Result<f64> {
        let norm = self.law.normalized_power_sum(self.index, tau)?;
        Ok(tau * self.ln_leading() + norm.ln())
    }

    pub fn power_sum(&self, tau: f64) -> Result<f64> {
        let norm = self.law.normalized_power_sum(self.index, tau)?;
        Ok(self.leading().powf(tau) * norm)
    }

    /// The spectrum divided by its leading value.
    pub fn normalized(&self) -> FactorSpectrum {
        FactorSpectrum {
            scale: 1.0,
            normalized: true,
            ..self.clone()
        }
    }

    pub fn scaled(&self, c: f64) -> FactorSpectrum {
        FactorSpectrum {
            scale: self.scale * c,
            ..self.clone()
        }
    }

    /// Smallest `J >= 2` whose analytic tail bound is below `tol * H(tau)`.
    pub fn truncation_index(&self, tau: f64, tol: f64) -> Result<u64> {
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
        }
        let h = self.tail_sum(tau)?;
        if h.is_infinite() {
            return Err(Error::NoFiniteTruncation { k: self.index });
        }
        let h = h.value();
        let target = tol * h;
        let first = |j: u64| (self.law.value(j) / self.law.value(2)).powf(tau);
        // H minus the partial sum is a second valid bound; it is the sharper
        // one for coarse tolerances where the analytic bounds are loose
        let partial_bound = |j: u64| -> f64 {
            if j > 4096 {
                return f64::INFINITY;
            }
            let mut s = 0.0;
            for i in 2..=j {
                s += first(i);
            }
            h - s
        };
        let ok = |j: u64| self.law.tail_bound(j, tau).min(partial_bound(j)) < target;
        if ok(2) {
            return Ok(2);
        }
        let mut hi: u64 = 4;
        while !ok(hi) {
            if hi > 1 << 52 {
                return Err(Error::Overflow(format!(
                    "truncation index for tolerance {tol} exceeds 2^52"
                )));
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}
