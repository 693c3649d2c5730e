//! Nyström eigenvalue estimates for the univariate kernels, checked against
//! the closed-form spectra.
//!
//! The kernel is sampled on a Gauss rule and the symmetric matrix
//! `D^(1/2) K D^(1/2)` is diagonalised at `n` and `2n` nodes. The gap between
//! the two solves is the reported refinement error; the returned values are
//! the Richardson combination of the pair using the kernel's known
//! convergence order.

mod kernel;
mod quadrature;

pub use kernel::{kernel_value, KernelSpec, KOROBOV_MAX_TERMS, KOROBOV_TAIL_TOL};
pub use quadrature::{gauss_hermite, gauss_legendre, quadrature_rule, Domain};

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{gaussian_omega, FactorLaw};
use kernel::KernelEval;

/// Eigenvalues in `[-CLIP_TOL, 0)` are clipped to zero; anything lower is an error.
pub const CLIP_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    /// Nonincreasing, nonnegative.
    pub eigenvalues: Vec<f64>,
    pub node_count: usize,
    /// `|lambda_j(n) - lambda_j(2n)|` per eigenvalue.
    pub refinement_error: Vec<f64>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub nodes: usize,
    pub m: usize,
    pub estimated: Vec<f64>,
    pub closed_form: Vec<f64>,
    /// Relative deviations `|est - exact| / exact`.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
}

/// The symmetrised Nyström matrix `D^(1/2) K D^(1/2)` on `n` nodes. Euler
/// kernels use `M (D M)^r` with `M_ij = min(x_i, x_j)`, i.e. `S^(r + 1)` for
/// the symmetrised min-kernel matrix `S`.
pub fn nystrom_matrix(spec: &KernelSpec, n: usize) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let (nodes, weights) = quadrature_rule(spec.domain(), n)?;
    let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let (eval, power) = match *spec {
        KernelSpec::EulerIterated { r } => (KernelEval::Min, r + 1),
        _ => (KernelEval::new(spec)?, 1),
    };
    let coeffs = eval.coefficients();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..=i)
                .map(|j| sw[i] * sw[j] * eval.value_with(coeffs.as_deref(), nodes[i], nodes[j]))
                .collect()
        })
        .collect();
    // far Hermite nodes carry weights near 1e-160; their squares underflow
    // inside the eigensolver
    let floor = 1e-100 * rows.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut s = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let v = if v.abs() < floor { 0.0 } else { v };
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    let mut a = s.clone();
    for _ in 1..power {
        a = &a * &s;
    }
    if power > 1 {
        a = (&a + a.transpose()) * 0.5;
    }
    Ok(a)
}

fn sorted_eigenvalues(a: DMatrix<f64>, warnings: &mut Vec<String>) -> Result<Vec<f64>> {
    let n = a.nrows();
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    if ev.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow(format!("{n}-node eigensolve produced non-finite values")));
    }
    let lowest = ev.last().copied().unwrap_or(0.0);
    if lowest < -CLIP_TOL {
        return Err(Error::NotPsd(lowest));
    }
    let clipped = ev.iter().filter(|&&v| v < 0.0).count();
    if clipped > 0 {
        warnings.push(format!(
            "{n} nodes: clipped {clipped} eigenvalues in [{lowest:e}, 0) to zero"
        ));
        for v in ev.iter_mut().filter(|v| **v < 0.0) {
            *v = 0.0;
        }
    }
    Ok(ev)
}

/// Convergence order in `n` used for the Richardson step, `None` when the
/// fine solve is already at rounding level.
fn convergence_order(spec: &KernelSpec) -> Option<f64> {
    match *spec {
        KernelSpec::EulerIterated { .. } => Some(2.0),
        KernelSpec::WienerIntegral { r } => Some(2.0 * f64::from(r) + 2.0),
        KernelSpec::KorobovSeries { alpha, .. } => Some(2.0 * alpha),
        KernelSpec::GaussianWeighted { .. } => None,
    }
}

/// Top `m` eigenvalues of the integral operator from `n` and `2n` node solves.
pub fn spectrum_estimate(spec: &KernelSpec, n: usize, m: usize) -> Result<SpectrumEstimate> {
    if m > n {
        return Err(Error::Domain(format!("m = {m} exceeds the node count {n}")));
    }
    let mut warnings = Vec::new();
    let coarse = sorted_eigenvalues(nystrom_matrix(spec, n)?, &mut warnings)?;
    let fine = sorted_eigenvalues(nystrom_matrix(spec, 2 * n)?, &mut warnings)?;
    let tail = spec.series_tail_bound()?;
    if tail > 0.0 {
        warnings.push(format!("series truncation contributes up to {tail:e} to the kernel"));
    }
    let refinement_error = (0..m).map(|j| (coarse[j] - fine[j]).abs()).collect();
    let mut eigenvalues: Vec<f64> = match convergence_order(spec) {
        Some(p) => {
            let f = 2f64.powf(p);
            (0..m).map(|j| ((f * fine[j] - coarse[j]) / (f - 1.0)).max(0.0)).collect()
        }
        None => fine[..m].to_vec(),
    };
    // the extrapolation can reorder values closer than its own error
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(SpectrumEstimate {
        eigenvalues,
        node_count: n,
        refinement_error,
        warnings,
    })
}

/// Exact top `m` eigenvalues, nonincreasing.
pub fn closed_form(spec: &KernelSpec, m: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    let law = match *spec {
        KernelSpec::EulerIterated { r } => FactorLaw::Euler {
            exponent: 2.0 * f64::from(r) + 2.0,
        },
        KernelSpec::WienerIntegral { r: 0 } => FactorLaw::Euler { exponent: 2.0 },
        KernelSpec::WienerIntegral { r } => {
            return Err(Error::NoClosedForm(format!(
                "Wiener kernel with r = {r} has no closed-form spectrum"
            )))
        }
        KernelSpec::KorobovSeries { alpha, beta, truncation } => {
            if let Some(t) = truncation {
                if (m as u64) > 2 * t + 1 {
                    return Err(Error::Domain(format!(
                        "truncation J = {t} has only {} nonzero eigenvalues",
                        2 * t + 1
                    )));
                }
            }
            FactorLaw::Korobov { r: alpha, g: beta }
        }
        KernelSpec::GaussianWeighted { gamma2 } => FactorLaw::Gaussian {
            omega: gaussian_omega(gamma2)?,
        },
    };
    let mut v: Vec<f64> = (1..=m as u64).map(|j| law.value(j)).collect();
    v.sort_by(|x, y| y.total_cmp(x));
    Ok(v)
}

/// Nyström estimate against the closed form, index by index.
pub fn verify_against_closed_form(spec: &KernelSpec, n: usize, m: usize) -> Result<DeviationReport> {
    let closed = closed_form(spec, m)?;
    let est = spectrum_estimate(spec, n, m)?;
    let deviations: Vec<f64> = est
        .eigenvalues
        .iter()
        .zip(&closed)
        .map(|(e, c)| (e - c).abs() / c)
        .collect();
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(DeviationReport {
        nodes: n,
        m,
        estimated: est.eigenvalues,
        closed_form: closed,
        deviations,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn euler_power_at_zero_is_min_matrix() {
        let a = nystrom_matrix(&KernelSpec::EulerIterated { r: 0 }, 40).unwrap();
        let b = nystrom_matrix(&KernelSpec::WienerIntegral { r: 0 }, 40).unwrap();
        assert_eq!(a, b);
        let (x, w) = quadrature_rule(Domain::UnitInterval, 40).unwrap();
        for i in 0..40 {
            for j in 0..40 {
                assert_eq!(a[(i, j)], w[i].sqrt() * w[j].sqrt() * x[i].min(x[j]));
            }
        }
    }

    #[test]
    fn euler_r0_examples() {
        let r = verify_against_closed_form(&KernelSpec::EulerIterated { r: 0 }, 200, 10).unwrap();
        assert!(r.max_deviation < 1e-4, "{}", r.max_deviation);
        let r = verify_against_closed_form(&KernelSpec::EulerIterated { r: 0 }, 400, 10).unwrap();
        assert!(r.max_deviation < 1e-5, "{}", r.max_deviation);
        let first = 4.0 / (PI * PI);
        assert!((r.estimated[0] / first - 1.0).abs() < 1e-5);
    }

    #[test]
    fn euler_r1_and_wiener_r0() {
        let r = verify_against_closed_form(&KernelSpec::EulerIterated { r: 1 }, 400, 6).unwrap();
        assert!(r.max_deviation < 1e-4, "{}", r.max_deviation);
        let r = verify_against_closed_form(&KernelSpec::WienerIntegral { r: 0 }, 400, 6).unwrap();
        assert!(r.max_deviation < 1e-5, "{}", r.max_deviation);
    }

    #[test]
    fn gaussian_examples() {
        for g in [0.25, 1.0, 4.0] {
            let spec = KernelSpec::GaussianWeighted { gamma2: g };
            let m = if g == 1.0 { 8 } else { 6 };
            let r = verify_against_closed_form(&spec, 100, m).unwrap();
            assert!(r.max_deviation < 1e-8, "gamma2={g}: {}", r.max_deviation);
        }
    }

    #[test]
    fn korobov_exact_series() {
        let spec = KernelSpec::KorobovSeries { alpha: 1.0, beta: 1.0, truncation: None };
        let r = verify_against_closed_form(&spec, 300, 5).unwrap();
        let want = [1.0, 1.0, 1.0, 0.25, 0.25];
        for (e, w) in r.estimated.iter().zip(want) {
            assert!((e - w).abs() < 1e-6, "{e} vs {w}");
        }
    }

    #[test]
    fn korobov_truncated_series() {
        let spec = KernelSpec::KorobovSeries { alpha: 1.0, beta: 1.0, truncation: Some(10_000) };
        let est = spectrum_estimate(&spec, 300, 5).unwrap();
        let want = [1.0, 1.0, 1.0, 0.25, 0.25];
        for (e, w) in est.eigenvalues.iter().zip(want) {
            assert!((e - w).abs() < 1e-6, "{e} vs {w}");
        }
        assert!(est.warnings.iter().any(|w| w.contains("truncation")));
    }

    #[test]
    fn wiener_has_no_closed_form() {
        let spec = KernelSpec::WienerIntegral { r: 1 };
        assert!(matches!(closed_form(&spec, 3), Err(Error::NoClosedForm(_))));
        let est = spectrum_estimate(&spec, 60, 4).unwrap();
        assert!(est.eigenvalues.windows(2).all(|w| w[1] <= w[0]));
        // r = 1 is the clamped-free beam: lambda_j = beta_j^-4 with 1 + cos b cosh b = 0
        let root = |lo: f64, hi: f64| {
            let f = |b: f64| 1.0 + b.cos() * b.cosh();
            let (mut a, mut c) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + c);
                if f(a) * f(mid) <= 0.0 {
                    c = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + c)
        };
        for (j, (lo, hi)) in [(1.0, 3.0), (4.0, 5.0), (7.0, 8.5)].into_iter().enumerate() {
            let exact = root(lo, hi).powi(-4);
            assert!((est.eigenvalues[j] / exact - 1.0).abs() < 1e-8, "j={j}");
        }
        // the leading asymptotic term is only approached for large j
        let lead = (PI * 2.5).powi(-4);
        assert!((est.eigenvalues[2] / lead - 1.0).abs() < 1e-3);
    }

    #[test]
    fn wiener_second_ratio_band() {
        let scaled: Vec<f64> = (1..=4u32)
            .map(|r| {
                let est = spectrum_estimate(&KernelSpec::WienerIntegral { r }, 80, 2).unwrap();
                let h = est.eigenvalues[1] / est.eigenvalues[0];
                h * f64::from(1 + r).powi(2)
            })
            .collect();
        let hi = scaled.iter().copied().fold(0.0, f64::max);
        let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(hi / lo <= 4.0, "{scaled:?}");
    }

    #[test]
    fn refinement_shrinks_with_nodes() {
        for spec in [
            KernelSpec::EulerIterated { r: 0 },
            KernelSpec::EulerIterated { r: 1 },
            KernelSpec::WienerIntegral { r: 1 },
            KernelSpec::KorobovSeries { alpha: 1.0, beta: 1.0, truncation: None },
        ] {
            let a = spectrum_estimate(&spec, 50, 5).unwrap();
            let b = spectrum_estimate(&spec, 100, 5).unwrap();
            for (x, y) in a.refinement_error.iter().zip(&b.refinement_error) {
                assert!(y < x || *y < 1e-13, "{spec:?}: {x} -> {y}");
            }
        }
    }

    #[test]
    fn estimates_are_sorted_and_nonnegative() {
        let spec = KernelSpec::GaussianWeighted { gamma2: 1.0 };
        let est = spectrum_estimate(&spec, 60, 60).unwrap();
        assert!(est.eigenvalues.iter().all(|&v| v >= 0.0));
        assert!(est.eigenvalues.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(est.node_count, 60);
        assert!(matches!(spectrum_estimate(&spec, 5, 6), Err(Error::Domain(_))));
    }
}
