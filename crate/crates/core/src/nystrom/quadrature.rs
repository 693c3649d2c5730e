use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `[0, 1]` with Lebesgue measure.
    UnitInterval,
    /// The real line with the probability weight `exp(-x^2) / sqrt(pi)`.
    GaussianLine,
}

/// Nodes (ascending) and positive weights summing to one.
pub fn quadrature_rule(domain: Domain, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Domain("a quadrature rule needs at least one node".into()));
    }
    Ok(match domain {
        Domain::UnitInterval => {
            let (x, w) = gauss_legendre(n);
            let nodes = x.iter().map(|t| 0.5 * (t + 1.0)).collect();
            let weights = w.iter().map(|v| 0.5 * v).collect();
            (nodes, weights)
        }
        Domain::GaussianLine => {
            let (x, w) = gauss_hermite(n);
            let s = PI.sqrt();
            (x, w.iter().map(|v| v / s).collect())
        }
    })
}

/// Gauss-Legendre on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-16 * z.abs().max(1e-3) {
                break;
            }
        }
        if n == 1 {
            // P_1 = z, single node at the origin
            z = 0.0;
            dp = 1.0;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss-Hermite for the weight `exp(-x^2)`: Jacobi-matrix eigenvalues as
/// starting points, polished by Newton on the orthonormal recurrence.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut x: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    x.sort_by(f64::total_cmp);
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let mut w = vec![0.0; n];
    for (z, wi) in x.iter_mut().zip(w.iter_mut()) {
        let mut pp = 1.0;
        for _ in 0..8 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 0..n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = *z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            *z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        *wi = 2.0 / (pp * pp);
    }
    // exact symmetry
    for i in 0..n / 2 {
        let z = 0.5 * (x[n - 1 - i] - x[i]);
        let v = 0.5 * (w[i] + w[n - 1 - i]);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = v;
        w[n - 1 - i] = v;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_two_points() {
        let (x, w) = quadrature_rule(Domain::UnitInterval, 2).unwrap();
        let h = 0.5 / 3f64.sqrt();
        assert!((x[0] - (0.5 - h)).abs() < 1e-15 && (x[1] - (0.5 + h)).abs() < 1e-15);
        assert!((w[0] - 0.5).abs() < 1e-15 && (w[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hermite_one_point() {
        let (x, w) = quadrature_rule(Domain::GaussianLine, 1).unwrap();
        assert_eq!(x, vec![0.0]);
        assert!((w[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 2, 3, 7, 50, 200, 800] {
            let (_, w) = quadrature_rule(Domain::UnitInterval, n).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-13, "legendre n={n}");
            assert!(w.iter().all(|&v| v > 0.0));
        }
        for n in [1, 2, 3, 8, 40, 100, 200] {
            let (x, w) = quadrature_rule(Domain::GaussianLine, n).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-13, "hermite n={n}");
            assert!(w.iter().all(|&v| v > 0.0));
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn legendre_polynomial_exactness() {
        for n in 1..=12usize {
            let (x, w) = quadrature_rule(Domain::UnitInterval, n).unwrap();
            for p in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(t, v)| v * t.powi(p as i32)).sum();
                let exact = 1.0 / (p as f64 + 1.0);
                assert!((q - exact).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn hermite_moments() {
        // E[X^(2k)] = (2k-1)!! / 2^k for X ~ N(0, 1/2)
        for n in 1..=10usize {
            let (x, w) = quadrature_rule(Domain::GaussianLine, n).unwrap();
            for p in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(t, v)| v * t.powi(p as i32)).sum();
                let exact = if p % 2 == 1 {
                    0.0
                } else {
                    (1..p).step_by(2).map(|i| i as f64).product::<f64>() / 2f64.powi(p as i32 / 2)
                };
                let scale: f64 = x.iter().zip(&w).map(|(t, v)| v * t.abs().powi(p as i32)).sum();
                assert!((q - exact).abs() < 1e-13 * scale.max(1.0), "n={n} p={p}");
            }
        }
    }
}
