//! Parameter sequences `k -> s_k` (smoothness `r_k`, weights `g_k`, `a_k`,
//! `b_k`, shape parameters `gamma_k^2`) with closed-form asymptotics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;

/// Number of leading terms checked for monotonicity and sign at construction.
pub const VALIDATION_WINDOW: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceDescriptor {
    /// `s_k = c`.
    Constant { c: f64 },
    /// `s_k = c * k^alpha`.
    Power { c: f64, alpha: f64 },
    /// `s_k = ceil(theta * ln(k + 1))`.
    LogGrowth { theta: f64 },
    /// `s_k = c * base^(scale * u_k)` for an inner sequence `u`.
    Exponential {
        #[serde(default = "one")]
        c: f64,
        base: f64,
        scale: f64,
        of: Box<SequenceDescriptor>,
    },
    /// Listed values for `k = 1..=len`; the last value repeats beyond the list.
    /// Asymptotics cannot be read off finite data, so they are declared.
    Explicit {
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        liminf_log_ratio: Option<ExtendedReal>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<ExtendedReal>,
    },
}

fn one() -> f64 {
    1.0
}

/// What a sequence is used for; fixes the validation rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceRole {
    /// Nonnegative integers, nondecreasing (Euler/Wiener `r_k`).
    Smoothness,
    /// Positive, nondecreasing (Korobov `r_k`, analytic Korobov `a_k`).
    PositiveNondecreasing,
    /// In `(0, 1]`, nonincreasing (Korobov `g_k`).
    UnitWeight,
    /// Positive, nonincreasing (Gaussian `gamma_k^2`).
    PositiveNonincreasing,
    /// Positive with positive infimum (analytic Korobov `b_k`).
    PositiveBoundedBelow,
}

impl SequenceDescriptor {
    pub fn constant(c: f64) -> Self {
        SequenceDescriptor::Constant { c }
    }

    pub fn power(c: f64, alpha: f64) -> Self {
        SequenceDescriptor::Power { c, alpha }
    }

    pub fn log_growth(theta: f64) -> Self {
        SequenceDescriptor::LogGrowth { theta }
    }

    pub fn exponential(c: f64, base: f64, scale: f64, of: SequenceDescriptor) -> Self {
        SequenceDescriptor::Exponential {
            c,
            base,
            scale,
            of: Box::new(of),
        }
    }

    pub fn explicit(values: Vec<f64>) -> Self {
        SequenceDescriptor::Explicit {
            values,
            liminf_log_ratio: None,
            limit: None,
        }
    }

    /// Evaluates `s_k` for `k >= 1`.
    pub fn value(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        let kf = k as f64;
        match self {
            SequenceDescriptor::Constant { c } => *c,
            SequenceDescriptor::Power { c, alpha } => c * kf.powf(*alpha),
            SequenceDescriptor::LogGrowth { theta } => (theta * (kf + 1.0).ln()).ceil(),
            SequenceDescriptor::Exponential { c, base, scale, of } => {
                c * base.powf(scale * of.value(k))
            }
            SequenceDescriptor::Explicit { values, .. } => {
                let i = (k - 1).min(values.len().saturating_sub(1));
                values.get(i).copied().unwrap_or(f64::NAN)
            }
        }
    }

    fn check_params(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        match self {
            SequenceDescriptor::Constant { c } if !c.is_finite() => bad("constant must be finite"),
            SequenceDescriptor::Power { c, alpha } if !c.is_finite() || !alpha.is_finite() => {
                bad("power parameters must be finite")
            }
            SequenceDescriptor::LogGrowth { theta } if !(theta.is_finite() && *theta >= 0.0) => {
                bad("log_growth theta must be finite and nonnegative")
            }
            SequenceDescriptor::Exponential { c, base, scale, of } => {
                if !(c.is_finite() && *c > 0.0 && base.is_finite() && *base > 0.0 && scale.is_finite())
                {
                    return bad("exponential needs c > 0, base > 0 and a finite scale");
                }
                of.check_params()
            }
            SequenceDescriptor::Explicit { values, .. } if values.is_empty() => {
                bad("explicit sequence needs at least one value")
            }
            _ => Ok(()),
        }
    }

    /// Checks the role's sign, integrality and monotonicity rules on
    /// `k <= VALIDATION_WINDOW`.
    pub fn validate(&self, role: SequenceRole, name: &str) -> Result<()> {
        self.check_params()
            .map_err(|e| Error::InvalidSpec(format!("{name}: {e}")))?;
        let fail = |k: usize, what: &str| {
            Err(Error::InvalidSpec(format!("{name}: {what} (at k = {k})")))
        };
        let mut prev = f64::NAN;
        for k in 1..=VALIDATION_WINDOW {
            let v = self.value(k);
            if !v.is_finite() {
                return fail(k, "value is not finite");
            }
            match role {
                SequenceRole::Smoothness => {
                    if v < 0.0 || (v - v.round()).abs() > 1e-9 {
                        return fail(k, "must be a nonnegative integer");
                    }
                }
                SequenceRole::UnitWeight => {
                    if !(v > 0.0 && v <= 1.0) {
                        return fail(k, "must lie in (0, 1]");
                    }
                }
                _ => {
                    if !(v > 0.0) {
                        return fail(k, "must be positive");
                    }
                }
            }
            if k > 1 {
                let ok = match role {
                    SequenceRole::Smoothness | SequenceRole::PositiveNondecreasing => v >= prev,
                    SequenceRole::UnitWeight | SequenceRole::PositiveNonincreasing => v <= prev,
                    SequenceRole::PositiveBoundedBelow => true,
                };
                if !ok {
                    return fail(k, "violates the required monotonicity");
                }
            }
            prev = v;
        }
        if role == SequenceRole::PositiveBoundedBelow && self.infimum()? <= 0.0 {
            return Err(Error::InvalidSpec(format!("{name}: infimum must be positive")));
        }
        Ok(())
    }

    /// `inf_k s_k` (closed form; explicit lists use their minimum).
    pub fn infimum(&self) -> Result<f64> {
        Ok(match self {
            SequenceDescriptor::Constant { c } => *c,
            SequenceDescriptor::Power { c, alpha } => {
                if (*alpha >= 0.0) == (*c >= 0.0) {
                    *c
                } else if *alpha < 0.0 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            SequenceDescriptor::LogGrowth { theta } => (theta * 2f64.ln()).ceil(),
            SequenceDescriptor::Exponential { .. } => {
                let lim = self.limit()?.value();
                (0..VALIDATION_WINDOW)
                    .map(|k| self.value(k + 1))
                    .fold(lim, f64::min)
            }
            SequenceDescriptor::Explicit { values, .. } => {
                values.iter().copied().fold(f64::INFINITY, f64::min)
            }
        })
    }

    /// `lim_k s_k` (for the monotone sequences used here the limit exists).
    pub fn limit(&self) -> Result<ExtendedReal> {
        Ok(match self {
            SequenceDescriptor::Constant { c } => ExtendedReal::finite(*c),
            SequenceDescriptor::Power { c, alpha } => {
                if *alpha < 0.0 || *c == 0.0 {
                    ExtendedReal::ZERO
                } else if *alpha == 0.0 {
                    ExtendedReal::finite(*c)
                } else if *c > 0.0 {
                    ExtendedReal::INFINITY
                } else {
                    ExtendedReal::finite(f64::NEG_INFINITY)
                }
            }
            SequenceDescriptor::LogGrowth { theta } => {
                if *theta > 0.0 {
                    ExtendedReal::INFINITY
                } else {
                    ExtendedReal::ZERO
                }
            }
            SequenceDescriptor::Exponential { c, base, scale, of } => {
                let kappa = scale * base.ln();
                let inner = of.limit()?;
                if kappa == 0.0 {
                    ExtendedReal::finite(*c)
                } else if inner.is_infinite() {
                    if (kappa > 0.0) == (inner.value() > 0.0) {
                        ExtendedReal::INFINITY
                    } else {
                        ExtendedReal::ZERO
                    }
                } else {
                    ExtendedReal::new(c * base.powf(scale * inner.value()))?
                }
            }
            SequenceDescriptor::Explicit { limit, values, .. } => match limit {
                Some(l) => *l,
                None => {
                    // the list repeats its last value, so this is exact for the evaluator
                    ExtendedReal::finite(*values.last().expect("validated nonempty"))
                }
            },
        })
    }

    /// `liminf_k ln(s_k^-1) / ln k`.
    pub fn liminf_log_ratio(&self) -> Result<ExtendedReal> {
        Ok(match self {
            SequenceDescriptor::Constant { c } => {
                if *c > 0.0 {
                    ExtendedReal::ZERO
                } else {
                    ExtendedReal::INFINITY
                }
            }
            SequenceDescriptor::Power { c, alpha } => {
                if *c > 0.0 {
                    ExtendedReal::finite(-alpha)
                } else {
                    return Err(Error::Domain("log ratio of a nonpositive sequence".into()));
                }
            }
            SequenceDescriptor::LogGrowth { theta } => {
                if *theta > 0.0 {
                    // ln ceil(theta ln(k+1)) / ln k -> 0
                    ExtendedReal::ZERO
                } else {
                    ExtendedReal::INFINITY
                }
            }
            SequenceDescriptor::Exponential { base, scale, of, .. } => {
                // ln(1/s_k) = -ln c - kappa u_k
                let kappa = scale * base.ln();
                if kappa == 0.0 {
                    ExtendedReal::ZERO
                } else if kappa < 0.0 {
                    of.liminf_over_log()?.scale(-kappa)
                } else {
                    let lim = of.limit()?;
                    if lim.is_infinite() {
                        return Err(Error::Undecidable(
                            "growing exponential has no finite log ratio".into(),
                        ));
                    }
                    ExtendedReal::ZERO
                }
            }
            SequenceDescriptor::Explicit {
                liminf_log_ratio, ..
            } => liminf_log_ratio.ok_or_else(|| {
                Error::Undecidable("explicit sequence without declared liminf_log_ratio".into())
            })?,
        })
    }

    /// `liminf_k s_k / ln k`.
    pub fn liminf_over_log(&self) -> Result<ExtendedReal> {
        Ok(match self {
            SequenceDescriptor::Constant { .. } => ExtendedReal::ZERO,
            SequenceDescriptor::Power { c, alpha } => {
                if *alpha > 0.0 && *c > 0.0 {
                    ExtendedReal::INFINITY
                } else if *alpha > 0.0 && *c < 0.0 {
                    ExtendedReal::finite(f64::NEG_INFINITY)
                } else {
                    ExtendedReal::ZERO
                }
            }
            SequenceDescriptor::LogGrowth { theta } => ExtendedReal::finite(*theta),
            SequenceDescriptor::Exponential { .. } | SequenceDescriptor::Explicit { .. } => {
                let lim = self.limit()?;
                if lim.is_infinite() {
                    return Err(Error::Undecidable(
                        "growth rate relative to ln k is not available for this descriptor".into(),
                    ));
                }
                ExtendedReal::ZERO
            }
        })
    }

    /// `liminf_k ln(1 + s_k) / ln k` for nonnegative sequences.
    pub fn liminf_log1p_ratio(&self) -> Result<ExtendedReal> {
        Ok(match self {
            SequenceDescriptor::Power { c, alpha } if *c > 0.0 && *alpha > 0.0 => {
                ExtendedReal::finite(*alpha)
            }
            SequenceDescriptor::Exponential { base, scale, of, .. }
                if self.limit()?.is_infinite() =>
            {
                of.liminf_over_log()?.scale(scale * base.ln())
            }
            SequenceDescriptor::Explicit { .. } if self.limit()?.is_infinite() => {
                return Err(Error::Undecidable(
                    "explicit sequence growth rate is not declared".into(),
                ))
            }
            // bounded or logarithmic growth
            _ => ExtendedReal::ZERO,
        })
    }

    /// Finite-window comparison of the empirical log ratio with the declared
    /// liminf. Advisory only; returns a warning message on disagreement.
    pub fn advisory_check(&self, name: &str) -> Option<String> {
        let declared = match self {
            SequenceDescriptor::Explicit {
                liminf_log_ratio: Some(d),
                ..
            } => *d,
            _ => return None,
        };
        let k = VALIDATION_WINDOW;
        let v = self.value(k);
        if !(v > 0.0) {
            return None;
        }
        let empirical = (1.0 / v).ln() / (k as f64).ln();
        let differs = if declared.is_infinite() {
            empirical < 10.0
        } else {
            (empirical - declared.value()).abs() > 0.1
        };
        differs.then(|| {
            format!(
                "{name}: empirical ln(1/s_k)/ln k at k = {k} is {empirical:.4}, declared liminf is {declared}"
            )
        })
    }
}
