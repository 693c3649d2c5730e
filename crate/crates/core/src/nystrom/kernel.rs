use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quadrature::{gauss_legendre, Domain};
use crate::error::{Error, Result};
use crate::special::periodic_cosine_series;

/// Tail target for choosing a Korobov truncation automatically.
pub const KOROBOV_TAIL_TOL: f64 = 1e-10;
/// Largest automatic Korobov truncation.
pub const KOROBOV_MAX_TERMS: u64 = 10_000_000;

/// Univariate reproducing kernels with a Nyström discretisation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    /// `r`-fold composition of the min kernel with itself (`r = 0` is `min`).
    EulerIterated { r: u32 },
    /// `int_0^1 (x - u)_+^r (y - u)_+^r / (r!)^2 du`.
    WienerIntegral { r: u32 },
    /// `1 + 2 beta sum_{j <= J} j^(-2 alpha) cos(2 pi j (x - y))`; `J = None`
    /// means the full series.
    KorobovSeries {
        alpha: f64,
        beta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation: Option<u64>,
    },
    /// `exp(-gamma^2 (x - y)^2)` on the real line under `exp(-x^2) / sqrt(pi)`.
    GaussianWeighted { gamma2: f64 },
}

impl KernelSpec {
    pub fn domain(&self) -> Domain {
        match self {
            KernelSpec::GaussianWeighted { .. } => Domain::GaussianLine,
            _ => Domain::UnitInterval,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::KorobovSeries { alpha, beta, truncation } => {
                if !(alpha > 0.5 && alpha.is_finite()) {
                    return Err(Error::InvalidSpec(format!(
                        "Korobov kernel needs alpha > 1/2, got {alpha}"
                    )));
                }
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(Error::InvalidSpec(format!(
                        "Korobov kernel needs beta > 0, got {beta}"
                    )));
                }
                if truncation == Some(0) {
                    return Err(Error::InvalidSpec("Korobov truncation must be at least 1".into()));
                }
                Ok(())
            }
            KernelSpec::GaussianWeighted { gamma2 } if !(gamma2 > 0.0 && gamma2.is_finite()) => {
                Err(Error::InvalidSpec(format!(
                    "Gaussian kernel needs gamma^2 > 0, got {gamma2}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Bound on the omitted Korobov terms `2 beta sum_{j > J} j^(-2 alpha)`;
    /// zero for the other kernels and for the full series.
    pub fn series_tail_bound(&self) -> Result<f64> {
        if !matches!(self, KernelSpec::KorobovSeries { .. }) {
            return Ok(0.0);
        }
        match KernelEval::new(self)? {
            KernelEval::KorobovTruncated { alpha, beta, terms } => {
                let s = 2.0 * alpha - 1.0;
                Ok(2.0 * beta * (terms as f64).powf(-s) / s)
            }
            _ => Ok(0.0),
        }
    }
}

/// A kernel with its per-spec constants resolved once.
#[derive(Clone, Debug)]
pub(crate) enum KernelEval {
    Min,
    Wiener { r: i32, norm: f64, u: Vec<f64>, w: Vec<f64> },
    KorobovExact { m: u32, beta: f64 },
    KorobovTruncated { alpha: f64, beta: f64, terms: u64 },
    Gaussian { gamma2: f64 },
}

fn auto_truncation(alpha: f64, beta: f64) -> Result<u64> {
    let s = 2.0 * alpha - 1.0;
    // 2 beta J^(-s) / s < tol
    let j = ((2.0 * beta / (s * KOROBOV_TAIL_TOL)).powf(1.0 / s)).floor() + 1.0;
    if !(j <= KOROBOV_MAX_TERMS as f64) {
        return Err(Error::Cap {
            requested: if j.is_finite() { j as u64 } else { u64::MAX },
            cap: KOROBOV_MAX_TERMS,
        });
    }
    Ok(j as u64)
}

impl KernelEval {
    pub(crate) fn new(spec: &KernelSpec) -> Result<Self> {
        spec.validate()?;
        Ok(match *spec {
            KernelSpec::EulerIterated { r: 0 } | KernelSpec::WienerIntegral { r: 0 } => {
                KernelEval::Min
            }
            KernelSpec::EulerIterated { .. } => return Err(Error::MatrixFormOnly),
            KernelSpec::WienerIntegral { r } => {
                let (t, w) = gauss_legendre(r as usize + 1);
                let fact: f64 = (1..=r).map(f64::from).product();
                KernelEval::Wiener {
                    r: r as i32,
                    norm: 1.0 / (fact * fact),
                    u: t.iter().map(|t| 0.5 * (t + 1.0)).collect(),
                    w: w.iter().map(|w| 0.5 * w).collect(),
                }
            }
            KernelSpec::KorobovSeries { alpha, beta, truncation } => match truncation {
                None if alpha.fract() == 0.0 && alpha <= 14.0 => KernelEval::KorobovExact {
                    m: alpha as u32,
                    beta,
                },
                None => KernelEval::KorobovTruncated {
                    alpha,
                    beta,
                    terms: auto_truncation(alpha, beta)?,
                },
                Some(terms) => KernelEval::KorobovTruncated { alpha, beta, terms },
            },
            KernelSpec::GaussianWeighted { gamma2 } => KernelEval::Gaussian { gamma2 },
        })
    }

    pub(crate) fn value(&self, x: f64, y: f64) -> f64 {
        match self {
            KernelEval::Min => x.min(y),
            KernelEval::Wiener { r, norm, u, w } => {
                let m = x.min(y);
                let mut acc = 0.0;
                for (ui, wi) in u.iter().zip(w) {
                    let t = m * ui;
                    acc += wi * ((x - t) * (y - t)).powi(*r);
                }
                norm * m * acc
            }
            KernelEval::KorobovExact { m, beta } => {
                1.0 + 2.0 * beta * periodic_cosine_series(*m, (x - y).abs())
            }
            KernelEval::KorobovTruncated { alpha, beta, terms } => {
                let c = (2.0 * PI * (x - y)).cos();
                let (mut prev, mut cur) = (1.0, c);
                let mut acc = 0.0;
                for j in 1..=*terms {
                    acc += cur * (j as f64).powf(-2.0 * alpha);
                    let next = 2.0 * c * cur - prev;
                    prev = cur;
                    cur = next;
                }
                1.0 + 2.0 * beta * acc
            }
            KernelEval::Gaussian { gamma2 } => (-gamma2 * (x - y) * (x - y)).exp(),
        }
    }

    /// `j^(-2 alpha)` coefficients are the costly part of the truncated
    /// series; rows of the matrix reuse them.
    pub(crate) fn coefficients(&self) -> Option<Vec<f64>> {
        match self {
            KernelEval::KorobovTruncated { alpha, terms, .. } => {
                Some((1..=*terms).map(|j| (j as f64).powf(-2.0 * alpha)).collect())
            }
            _ => None,
        }
    }

    pub(crate) fn value_with(&self, coeffs: Option<&[f64]>, x: f64, y: f64) -> f64 {
        match (self, coeffs) {
            (KernelEval::KorobovTruncated { beta, .. }, Some(cs)) => {
                let c = (2.0 * PI * (x - y)).cos();
                let (mut prev, mut cur) = (1.0, c);
                let mut acc = 0.0;
                for &a in cs {
                    acc += cur * a;
                    let next = 2.0 * c * cur - prev;
                    prev = cur;
                    cur = next;
                }
                1.0 + 2.0 * beta * acc
            }
            _ => self.value(x, y),
        }
    }
}

/// Pointwise kernel value. Euler kernels with `r >= 1` exist only in
/// matrix form.
pub fn kernel_value(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    let eval = KernelEval::new(spec)?;
    let inside = |t: f64| match spec.domain() {
        Domain::UnitInterval => (0.0..=1.0).contains(&t),
        Domain::GaussianLine => t.is_finite(),
    };
    if !inside(x) || !inside(y) {
        return Err(Error::Domain(format!("({x}, {y}) lies outside the kernel domain")));
    }
    Ok(eval.value(x, y))
}
