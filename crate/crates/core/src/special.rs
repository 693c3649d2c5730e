//! Special functions: Hurwitz/Riemann zeta, the Euler-kernel series `G`,
//! its unit root `xi0`, Bernoulli polynomials and a tail bound for
//! stretched-exponential series.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `B_{2k}` for `k = 1..=14`.
const BERNOULLI_EVEN: [f64; 14] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
];

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Bernoulli number `B_n` for `n <= 28`.
pub fn bernoulli_number(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => -0.5,
        n if n % 2 == 1 => 0.0,
        n if n <= 28 => BERNOULLI_EVEN[(n / 2 - 1) as usize],
        _ => panic!("bernoulli_number: n = {n} out of table range"),
    }
}

/// Bernoulli polynomial `B_n(t)` for `n <= 28`.
pub fn bernoulli_polynomial(n: u32, t: f64) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for k in 0..=n {
        acc += binom * bernoulli_number(k) * t.powi((n - k) as i32);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    acc
}

/// `sum_{j>=1} cos(2 pi j t) / j^(2m)` via the Bernoulli-polynomial identity.
pub fn periodic_cosine_series(m: u32, t: f64) -> f64 {
    assert!((1..=14).contains(&m));
    let frac = t - t.floor();
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    sign * (2.0 * PI).powi(2 * m as i32) * bernoulli_polynomial(2 * m, frac)
        / (2.0 * factorial(2 * m))
}

/// Hurwitz zeta `zeta(s, a) = sum_{n>=0} (n + a)^(-s)` for `s > 1`, `a > 0`.
///
/// Euler-Maclaurin summation: 32 direct terms, then the integral, the
/// half-term and up to 14 Bernoulli corrections.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("zeta requires s > 1, got {s}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("hurwitz zeta requires a > 0, got {a}")));
    }
    const N: usize = 32;
    let x = N as f64 + a;
    let mut head = 0.0;
    for n in (0..N).rev() {
        head += (n as f64 + a).powf(-s);
    }
    let x_pow = x.powf(-s);
    let mut sum = head + x * x_pow / (s - 1.0) + 0.5 * x_pow;
    // t_k = s (s+1) ... (s+2k-2) x^(-s-2k+1)
    let mut t = s * x_pow / x;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / factorial(2 * k as u32 + 2) * t;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let j = (2 * k + 1) as f64;
        t *= (s + j) * (s + j + 1.0) / (x * x);
    }
    Ok(sum)
}

/// Riemann zeta for real `s > 1`.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    hurwitz_zeta(s, 1.0)
}

/// `G(x) = sum_{j>=1} (pi (j - 1/2))^(-x)`, via `(2/pi)^x (1 - 2^-x) zeta(x)`.
pub fn g_function(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::Domain(format!(
            "G(x) diverges for x <= 1, got {x}"
        )));
    }
    Ok((2.0 / PI).powf(x) * (1.0 - 2f64.powf(-x)) * riemann_zeta(x)?)
}

/// Unique root of `G(x) = 1` in `(1, 2)`, by bisection on `(1 + 1e-6, 2)`.
pub fn xi0() -> f64 {
    let mut lo = 1.0 + 1e-6;
    let mut hi = 2.0;
    let g = |x: f64| g_function(x).expect("bracket lies in (1, inf)") - 1.0;
    debug_assert!(g(lo) > 0.0 && g(hi) < 0.0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Upper bound on `sum_{m > start} exp(-c m^b)` for `c, b > 0`.
///
/// Compares with `int_start^inf exp(-c x^b) dx = c^(-1/b) / b * Gamma(1/b, c start^b)`
/// and bounds the incomplete gamma function. Returns `+inf` when the bound
/// does not apply yet (the caller should sum further).
pub fn stretched_exp_tail_bound(c: f64, b: f64, start: f64) -> f64 {
    let s = 1.0 / b;
    let y = c * start.powf(b);
    if !(y > 0.0) {
        return f64::INFINITY;
    }
    let denom = if s > 1.0 {
        if y <= 2.0 * (s - 1.0) {
            return f64::INFINITY;
        }
        1.0 - (s - 1.0) / y
    } else {
        1.0
    };
    let ln_bound = -s * c.ln() - b.ln() + (s - 1.0) * y.ln() - y - denom.ln();
    ln_bound.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct partial sum plus the midpoint integral remainder.
    fn zeta_direct(s: f64, n: usize) -> f64 {
        let mut sum = 0.0;
        for j in (1..=n).rev() {
            sum += (j as f64).powf(-s);
        }
        sum + (n as f64 + 0.5).powf(1.0 - s) / (s - 1.0)
    }

    #[test]
    fn zeta_even_values() {
        assert!((riemann_zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((riemann_zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((riemann_zeta(6.0).unwrap() - PI.powi(6) / 945.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_three_halves_against_direct_sum() {
        let z = riemann_zeta(1.5).unwrap();
        assert!((z - 2.612_375_348_685_488).abs() < 1e-12);
        let direct = zeta_direct(1.5, 1_000_000);
        assert!((z - direct).abs() / z < 1e-10);
    }

    #[test]
    fn zeta_near_pole_and_large_s() {
        let z = riemann_zeta(1.01).unwrap();
        let direct = zeta_direct(1.01, 1_000_000);
        assert!((z - direct).abs() / z < 1e-9, "{z} vs {direct}");
        let big = riemann_zeta(60.0).unwrap();
        assert!((big - 1.0 - 2f64.powi(-60)).abs() < 1e-18);
    }

    #[test]
    fn zeta_domain() {
        assert!(riemann_zeta(1.0).is_err());
        assert!(riemann_zeta(0.5).is_err());
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
    }

    #[test]
    fn hurwitz_half_shift() {
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        let s = 3.3;
        let lhs = hurwitz_zeta(s, 0.5).unwrap();
        let rhs = (2f64.powf(s) - 1.0) * riemann_zeta(s).unwrap();
        assert!((lhs - rhs).abs() / rhs < 1e-13);
    }

    #[test]
    fn g_at_two_is_half() {
        assert!((g_function(2.0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn g_reduction_matches_direct_series() {
        for &x in &[1.2, 1.5, 3.0] {
            let n = 1_000_000usize;
            let mut direct = 0.0;
            for j in (1..=n).rev() {
                direct += (PI * (j as f64 - 0.5)).powf(-x);
            }
            direct += PI.powf(-x) * (n as f64).powf(1.0 - x) / (x - 1.0);
            let g = g_function(x).unwrap();
            assert!((g - direct).abs() / g < 1e-10, "x={x}: {g} vs {direct}");
        }
    }

    #[test]
    fn g_strictly_decreasing_and_blows_up() {
        let grid: Vec<f64> = (0..200).map(|i| 1.05 + i as f64 * (10.0 - 1.05) / 199.0).collect();
        for w in grid.windows(2) {
            assert!(g_function(w[1]).unwrap() < g_function(w[0]).unwrap());
        }
        assert!(g_function(1.0 + 1e-6).unwrap() > 1e5);
        assert!(g_function(1.0).is_err());
    }

    #[test]
    fn xi0_is_the_unit_root() {
        let x = xi0();
        assert!(g_function(1.2).unwrap() > 1.0 && g_function(1.5).unwrap() < 1.0);
        assert!(x > 1.2 && x < 1.5);
        assert!((g_function(x).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bernoulli_polynomials_low_order() {
        let t: f64 = 0.3;
        assert!((bernoulli_polynomial(2, t) - (t * t - t + 1.0 / 6.0)).abs() < 1e-15);
        let b4 = t.powi(4) - 2.0 * t.powi(3) + t * t - 1.0 / 30.0;
        assert!((bernoulli_polynomial(4, t) - b4).abs() < 1e-15);
    }

    #[test]
    fn cosine_series_alternating_identity() {
        // sum (-1)^j / j^2 = -pi^2 / 12
        let v = periodic_cosine_series(1, 0.5);
        assert!((v + PI * PI / 12.0).abs() < 1e-14);
        // at t = 0 it is zeta(2m)
        assert!((periodic_cosine_series(2, 0.0) - PI.powi(4) / 90.0).abs() < 1e-13);
    }

    #[test]
    fn stretched_tail_bound_dominates() {
        for &(c, b) in &[(0.5, 1.0), (0.3, 0.5), (1.2, 2.0), (0.05, 0.7)] {
            for &start in &[5.0, 20.0, 80.0] {
                let bound = stretched_exp_tail_bound(c, b, start);
                let mut actual = 0.0;
                let mut m = start as u64 + 1;
                loop {
                    let t = (-c * (m as f64).powf(b)).exp();
                    actual += t;
                    if t < 1e-300 || m > 5_000_000 {
                        break;
                    }
                    m += 1;
                }
                assert!(actual <= bound * (1.0 + 1e-12), "c={c} b={b} start={start}");
            }
        }
    }
}
