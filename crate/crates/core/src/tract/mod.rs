//! Tractability classification from closed-form limits of the second ratios.
//!
//! With `h_k = lambda(k,2) / lambda(k,1)` nonincreasing and `tau0` the
//! summability threshold of the normalised tails:
//!
//! * SPT and PT hold iff `A_* = liminf ln(1/h_k) / ln k > 0`, with exponent
//!   `p* = max{2 / A_*, 2 tau0}`;
//! * QPT, UWT, WT and `(s,t)`-WT for `t <= 1` hold iff `B = lim ln(1/h_k) > 0`,
//!   with exponent `t* = max{2 / B, 2 tau0}`;
//! * `(s,t)`-WT with `t > 1` always holds;
//! * the curse holds iff `h_k = 1` for all `k`.
//!
//! Numerical sequences never produce a verdict: limits come from descriptor
//! closed forms or from declared values.

mod limits;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::{ExtendedReal, Interval};
use crate::spectra::{tau_zero, Criterion, FamilyParams, FamilySpec, SequenceDescriptor};

pub use crate::special::{g_function, riemann_zeta, xi0};
pub use limits::{
    euler_abs_spt_exponent, gaussian_shape_rate, korobov_classic_spt_exponent, limit_a_star,
    limit_b, qpt_exponent, spt_exponent,
};

/// Unknown flags and exponents serialise as `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TractabilityReport {
    pub criterion: Criterion,
    pub spt: Option<bool>,
    pub pt: Option<bool>,
    pub qpt: Option<bool>,
    pub uwt: Option<bool>,
    pub wt: Option<bool>,
    pub curse: Option<bool>,
    pub p_star: Option<Interval>,
    pub t_star: Option<Interval>,
    pub a_star: Option<ExtendedReal>,
    pub b: Option<ExtendedReal>,
    pub tau0: Interval,
    pub provenance: BTreeMap<String, String>,
}

impl TractabilityReport {
    fn new(criterion: Criterion, tau0: Interval) -> Self {
        TractabilityReport {
            criterion,
            spt: None,
            pt: None,
            qpt: None,
            uwt: None,
            wt: None,
            curse: None,
            p_star: None,
            t_star: None,
            a_star: None,
            b: None,
            tau0,
            provenance: BTreeMap::new(),
        }
    }

    /// `(s,t)`-weak tractability; `None` for invalid `(s, t)` or an unknown verdict.
    pub fn st_wt(&self, s: f64, t: f64) -> Option<bool> {
        if !(s > 0.0 && t > 0.0) {
            return None;
        }
        if t > 1.0 {
            Some(true)
        } else {
            self.wt
        }
    }

    fn note(&mut self, field: &str, how: impl Into<String>) {
        self.provenance.insert(field.to_string(), how.into());
    }

    fn set_spt(&mut self, spt: Option<bool>) {
        self.spt = spt;
        self.pt = spt;
    }

    fn set_qpt(&mut self, qpt: Option<bool>) {
        self.qpt = qpt;
        self.uwt = qpt;
        self.wt = qpt;
        self.curse = qpt.map(|q| !q);
    }

    /// Fills flags and exponents from `A_*`, `B` and `tau0`.
    fn apply(&mut self, a_star: Option<ExtendedReal>, b: Option<ExtendedReal>, source: &str) {
        self.a_star = a_star;
        self.b = b;
        let tau0 = self.tau0;
        let tau0_known = !tau0.hi.is_infinite();
        if let Some(a) = a_star {
            self.note("a_star", source);
            if tau0_known {
                self.set_spt(Some(a.is_positive()));
                self.p_star = spt_exponent(a, tau0).ok();
                self.note("spt", "A_* > 0 test");
                if self.p_star.is_some() {
                    self.note("p_star", "max{2/A_*, 2 tau0}");
                }
            }
        }
        if let Some(b) = b {
            self.note("b", source);
            if tau0_known {
                self.set_qpt(Some(b.is_positive()));
                self.t_star = qpt_exponent(b, tau0).ok();
                self.note("qpt", "B > 0 test; curse iff h_k = 1 for all k");
                if self.t_star.is_some() {
                    self.note("t_star", "max{2/B, 2 tau0}");
                }
            }
        }
        if !tau0_known {
            self.note("tau0", "unknown: not declared, no verdicts issued");
        }
    }
}

/// Classifies a family under a criterion.
pub fn classify(spec: &FamilySpec, criterion: Criterion) -> Result<TractabilityReport> {
    if !spec.criterion_support().contains(criterion) {
        return Err(Error::UnsupportedCriterion {
            family: spec.family().name(),
            criterion,
        });
    }
    let tau0 = tau_zero(spec);
    let mut rep = TractabilityReport::new(criterion, tau0);
    rep.note("tau0", "closed form");
    match (spec.params(), criterion) {
        (FamilyParams::Euler { r }, Criterion::Abs) => {
            let p = euler_abs_spt_exponent(r)?;
            rep.set_spt(Some(true));
            rep.set_qpt(Some(true));
            rep.p_star = Some(Interval { lo: p, hi: p });
            rep.note("spt", "euler absolute criterion: SPT for every admissible r");
            rep.note("p_star", "max{xi0 / (lim r + 1), 1 / (r_1 + 1)} with G(xi0) = 1");
            rep.note("qpt", "implied by SPT");
            rep.note("t_star", "not available for the absolute criterion");
        }
        (FamilyParams::Gaussian { gamma2 }, Criterion::Abs) => {
            let rate = gaussian_shape_rate(gamma2);
            rep.set_spt(Some(true));
            rep.set_qpt(Some(true));
            rep.note("spt", "gaussian absolute criterion: SPT for all shape parameters");
            rep.note("qpt", "implied by SPT");
            rep.note("t_star", "not available for the absolute criterion");
            match rate {
                Ok(rate) => {
                    let p = ExtendedReal::finite(2.0).min(rate.reciprocal_scaled(2.0));
                    rep.p_star = Some(Interval { lo: p, hi: p });
                    rep.note("p_star", "min{2, 2 / r(gamma)}, r(gamma) = liminf ln(1/gamma_k^2) / ln k");
                }
                Err(e) => rep.note("p_star", format!("unknown: {e}")),
            }
        }
        (FamilyParams::Gaussian { gamma2 }, Criterion::Nor) => {
            let lim = gamma2.limit()?;
            if lim.is_positive() {
                let w = crate::spectra::gaussian_omega(lim.value().min(f64::MAX))?;
                let b = ExtendedReal::finite(-w.ln());
                rep.apply(Some(ExtendedReal::ZERO), Some(b), "closed form: omega at lim gamma_k^2 > 0");
            } else {
                let a = gaussian_shape_rate(gamma2);
                let src = "closed form: omega_k ~ gamma_k^2 as gamma_k^2 -> 0";
                match a {
                    Ok(a) => rep.apply(Some(a), Some(ExtendedReal::INFINITY), src),
                    Err(e) => {
                        rep.apply(None, Some(ExtendedReal::INFINITY), src);
                        rep.note("a_star", format!("unknown: {e}"));
                    }
                }
            }
        }
        (FamilyParams::Wiener { r }, _) => classify_wiener(&mut rep, r)?,
        _ => {
            let h = spec
                .h_descriptor()
                .ok_or_else(|| Error::Undecidable("no second-ratio sequence declared".into()))?;
            let declared = matches!(h, SequenceDescriptor::Explicit { .. });
            let src = if declared { "declared" } else { "closed form" };
            let a = limit_a_star(&h);
            let b = limit_b(&h);
            rep.apply(a.as_ref().ok().copied(), b.as_ref().ok().copied(), src);
            if let Err(e) = a {
                rep.note("a_star", format!("unknown: {e}"));
            }
            if let Err(e) = b {
                rep.note("b", format!("unknown: {e}"));
            }
            if let FamilyParams::Korobov { r, g } = spec.params() {
                if let Some(note) = korobov_cross_check(r, g, rep.p_star) {
                    rep.note("p_star_cross_check", note);
                }
            }
        }
    }
    Ok(rep)
}

fn classify_wiener(rep: &mut TractabilityReport, r: &SequenceDescriptor) -> Result<()> {
    if r.limit()?.value() == 0.0 {
        // the min kernel: exact spectrum (pi (j - 1/2))^-2
        let h = SequenceDescriptor::constant(1.0 / 9.0);
        rep.apply(
            Some(limit_a_star(&h)?),
            Some(limit_b(&h)?),
            "closed form: r = 0 is the min kernel",
        );
        return Ok(());
    }
    // h_k = Theta((1 + r_k)^-2); constants do not move A_*
    let a = r.liminf_log1p_ratio().map(|x| x.scale(2.0));
    match a {
        Ok(a) => {
            rep.a_star = Some(a);
            rep.note("a_star", "2 liminf ln(1 + r_k) / ln k from the (1 + r_k)^-2 envelope");
            rep.set_spt(Some(a.is_positive()));
            rep.note("spt", "A_* > 0 test");
            if a.is_positive() {
                rep.p_star = spt_exponent(a, rep.tau0).ok();
                rep.note("p_star", "max{2/A_*, 2 tau0} over tau0 in [0, 3/5]");
                rep.set_qpt(Some(true));
                rep.b = Some(ExtendedReal::INFINITY);
                rep.t_star = qpt_exponent(ExtendedReal::INFINITY, rep.tau0).ok();
                rep.note("qpt", "implied by SPT");
                rep.note("b", "r_k -> inf");
            } else {
                rep.note("qpt", "unknown: the envelope constant is unspecified");
            }
        }
        Err(e) => rep.note("a_star", format!("unknown: {e}")),
    }
    Ok(())
}

fn korobov_cross_check(
    r: &SequenceDescriptor,
    g: &SequenceDescriptor,
    p_star: Option<Interval>,
) -> Option<String> {
    let SequenceDescriptor::Exponential { c, base, scale, of } = g else {
        return None;
    };
    let two_pi = 2.0 * std::f64::consts::PI;
    if *c != 1.0 || (*base - two_pi).abs() > 1e-12 || *scale != -2.0 || **of != *r {
        return None;
    }
    Some(match (korobov_classic_spt_exponent(r), p_star) {
        (Ok(p), Some(iv)) if (p.value() - iv.hi.value()).abs() <= 1e-12 * p.value().max(1.0) => {
            format!("agrees with max{{1/r_1, R / ln 2pi}} = {p}")
        }
        (Ok(p), _) => format!("DISAGREES with max{{1/r_1, R / ln 2pi}} = {p}"),
        (Err(Error::NotSpt), None) => "both routes: not SPT".to_string(),
        (Err(e), _) => format!("second route failed: {e}"),
    })
}
