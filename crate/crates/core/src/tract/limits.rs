use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::extended::{ExtendedReal, Interval};
use crate::special::xi0;
use crate::spectra::SequenceDescriptor;

/// `A_* = liminf_k ln(1/h_k) / ln k`.
pub fn limit_a_star(h: &SequenceDescriptor) -> Result<ExtendedReal> {
    h.liminf_log_ratio()
}

/// `B = lim_k ln(1/h_k)`.
pub fn limit_b(h: &SequenceDescriptor) -> Result<ExtendedReal> {
    let lim = h.limit()?;
    if lim.is_infinite() || lim.value() < 0.0 {
        return Err(Error::Domain(format!("second ratios must stay in (0, 1], limit is {lim}")));
    }
    if lim.value() == 0.0 {
        return Ok(ExtendedReal::INFINITY);
    }
    Ok(ExtendedReal::finite((-lim.value().ln()).max(0.0)))
}

fn exponent(rate: ExtendedReal, tau0: Interval) -> Interval {
    let base = rate.reciprocal_scaled(2.0);
    Interval {
        lo: base.max(tau0.lo.scale(2.0)),
        hi: base.max(tau0.hi.scale(2.0)),
    }
}

/// `p* = max{2 / A_*, 2 tau0}` over the interval of `tau0`.
pub fn spt_exponent(a_star: ExtendedReal, tau0: Interval) -> Result<Interval> {
    if !a_star.is_positive() {
        return Err(Error::NotSpt);
    }
    Ok(exponent(a_star, tau0))
}

/// `t* = max{2 / B, 2 tau0}` over the interval of `tau0`.
pub fn qpt_exponent(b: ExtendedReal, tau0: Interval) -> Result<Interval> {
    if !b.is_positive() {
        return Err(Error::NotQpt);
    }
    Ok(exponent(b, tau0))
}

/// Euler kernels, absolute criterion: `max{xi0 / (lim r_k + 1), 1 / (r_1 + 1)}`.
pub fn euler_abs_spt_exponent(r: &SequenceDescriptor) -> Result<ExtendedReal> {
    let r_bar = r.limit()?;
    let first = if r_bar.is_infinite() {
        ExtendedReal::ZERO
    } else {
        ExtendedReal::finite(xi0() / (r_bar.value() + 1.0))
    };
    Ok(first.max(ExtendedReal::finite(1.0 / (r.value(1) + 1.0))))
}

/// `r(gamma) = liminf_k ln(1/gamma_k^2) / ln k`.
pub fn gaussian_shape_rate(gamma2: &SequenceDescriptor) -> Result<ExtendedReal> {
    Ok(gamma2.liminf_log_ratio()?.max(ExtendedReal::ZERO))
}

/// Korobov weights `g_k = (2 pi)^(-2 r_k)`: `max{1/r_1, R / ln(2 pi)}` with
/// `R = limsup_k ln k / r_k`.
pub fn korobov_classic_spt_exponent(r: &SequenceDescriptor) -> Result<ExtendedReal> {
    let growth = r.liminf_over_log()?;
    let big_r = growth.reciprocal_scaled(1.0);
    if big_r.is_infinite() {
        return Err(Error::NotSpt);
    }
    let second = ExtendedReal::finite(big_r.value() / (2.0 * PI).ln());
    Ok(ExtendedReal::finite(1.0 / r.value(1)).max(second))
}
