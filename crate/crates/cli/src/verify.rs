//! Named verification suites. Each check reports a deviation and the
//! threshold it must not exceed.

use serde::Serialize;
use tractal::nystrom::{spectrum_estimate, verify_against_closed_form, KernelSpec};
use tractal::oracle::brute_force_trace;
use tractal::products::{
    brute_force_oracle, count_products_above, oracle_count, oracle_validity_threshold, trace_sum,
    COUNTING_CAP,
};
use tractal::tract::{g_function, riemann_zeta, xi0};
use tractal::{FamilySpec, ProductProblem, SequenceDescriptor as S};

use crate::args::Suite;
use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, deviation: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            deviation,
            threshold,
            passed: deviation <= threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::EulerNystrom => "euler-nystrom",
        Suite::WienerNystrom => "wiener-nystrom",
        Suite::GaussianNystrom => "gaussian-nystrom",
        Suite::KorobovNystrom => "korobov-nystrom",
        Suite::TraceIdentity => "eq21-identity",
        Suite::CountingOracle => "counting-oracle",
        Suite::SpecialFunctions => "special-functions",
        Suite::All => "all",
    }
}

pub fn run_suite(suite: Suite) -> Result<VerifyReport> {
    let checks = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::EulerNystrom,
                Suite::WienerNystrom,
                Suite::GaussianNystrom,
                Suite::KorobovNystrom,
                Suite::TraceIdentity,
                Suite::CountingOracle,
                Suite::SpecialFunctions,
            ] {
                for mut c in checks_for(s)? {
                    c.name = format!("{}: {}", suite_name(s), c.name);
                    all.push(c);
                }
            }
            all
        }
        s => checks_for(s)?,
    };
    Ok(VerifyReport {
        suite: suite_name(suite).to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn checks_for(suite: Suite) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::EulerNystrom => euler()?,
        Suite::WienerNystrom => wiener()?,
        Suite::GaussianNystrom => gaussian()?,
        Suite::KorobovNystrom => korobov()?,
        Suite::TraceIdentity => trace_identity()?,
        Suite::CountingOracle => counting_oracle()?,
        Suite::SpecialFunctions => special()?,
        Suite::All => unreachable!("expanded by run_suite"),
    })
}

fn relative(spec: &KernelSpec, n: usize, m: usize) -> Result<f64> {
    Ok(verify_against_closed_form(spec, n, m)?.max_deviation)
}

fn absolute(estimated: &[f64], exact: &[f64]) -> f64 {
    estimated
        .iter()
        .zip(exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn euler() -> Result<Vec<Check>> {
    let r0 = KernelSpec::EulerIterated { r: 0 };
    let r1 = KernelSpec::EulerIterated { r: 1 };
    Ok(vec![
        Check::new("r=0, 200 nodes, m=10", relative(&r0, 200, 10)?, 1e-4),
        Check::new("r=0, 400 nodes, m=10", relative(&r0, 400, 10)?, 1e-5),
        Check::new("r=1, 400 nodes, m=6", relative(&r1, 400, 6)?, 1e-4),
    ])
}

/// Root of `1 + cos b cosh b` in `[lo, hi]`, by bisection.
fn beam_root(lo: f64, hi: f64) -> f64 {
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
}

fn wiener() -> Result<Vec<Check>> {
    let mut checks = vec![Check::new(
        "r=0, 400 nodes, m=6",
        relative(&KernelSpec::WienerIntegral { r: 0 }, 400, 6)?,
        1e-5,
    )];
    // r = 1 is the clamped-free beam
    let est = spectrum_estimate(&KernelSpec::WienerIntegral { r: 1 }, 60, 3)?;
    let exact: Vec<f64> = [(1.0, 3.0), (4.0, 5.0), (7.0, 8.5)]
        .into_iter()
        .map(|(lo, hi)| beam_root(lo, hi).powi(-4))
        .collect();
    let dev = est
        .eigenvalues
        .iter()
        .zip(&exact)
        .map(|(e, x)| (e / x - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check::new("r=1 against beam eigenvalues, m=3", dev, 1e-8));
    let scaled = (1..=4u32)
        .map(|r| {
            let est = spectrum_estimate(&KernelSpec::WienerIntegral { r }, 80, 2)?;
            Ok(est.eigenvalues[1] / est.eigenvalues[0] * f64::from(1 + r).powi(2))
        })
        .collect::<Result<Vec<f64>>>()?;
    let hi = scaled.iter().copied().fold(0.0, f64::max);
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(Check::new("spread of (r+1)^2 h over r=1..4", hi / lo, 4.0));
    Ok(checks)
}

fn gaussian() -> Result<Vec<Check>> {
    [0.25, 1.0, 4.0]
        .into_iter()
        .map(|g| {
            let spec = KernelSpec::GaussianWeighted { gamma2: g };
            Ok(Check::new(format!("gamma2={g}, 100 nodes, m=6"), relative(&spec, 100, 6)?, 1e-8))
        })
        .collect()
}

fn korobov() -> Result<Vec<Check>> {
    let exact = [1.0, 1.0, 1.0, 0.25, 0.25];
    let series = KernelSpec::KorobovSeries { alpha: 1.0, beta: 1.0, truncation: None };
    let rep = verify_against_closed_form(&series, 300, 5)?;
    let truncated = KernelSpec::KorobovSeries { alpha: 1.0, beta: 1.0, truncation: Some(10_000) };
    let est = spectrum_estimate(&truncated, 300, 5)?;
    Ok(vec![
        Check::new("alpha=beta=1, 300 nodes, m=5", absolute(&rep.estimated, &rep.closed_form), 1e-6),
        Check::new("alpha=beta=1, J=1e4, 300 nodes, m=5", absolute(&est.eigenvalues, &exact), 1e-6),
    ])
}

fn fixed_families() -> Result<Vec<(&'static str, FamilySpec)>> {
    Ok(vec![
        ("euler r=1", FamilySpec::euler(S::constant(1.0))?),
        ("wiener r=0", FamilySpec::wiener(S::constant(0.0))?),
        ("korobov r=2 g=k^-2", FamilySpec::korobov(S::constant(2.0), S::power(1.0, -2.0))?),
        ("gaussian gamma2=1", FamilySpec::gaussian(S::constant(1.0))?),
        ("gaussian gamma2=k^-2", FamilySpec::gaussian(S::power(1.0, -2.0))?),
    ])
}

fn trace_identity() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, spec) in fixed_families()? {
        let mut worst = 0.0f64;
        for d in 1..=4 {
            let p = ProductProblem::from_family(&spec, d)?;
            for tau in [0.8, 1.0, 2.0] {
                let fast = trace_sum(&p, tau, 1e-12)?;
                let brute = brute_force_trace(&p, tau, 30)?;
                worst = worst.max((fast / brute - 1.0).abs());
            }
        }
        checks.push(Check::new(format!("{name}, d<=4, tau in {{0.8, 1, 2}}"), worst, 1e-9));
    }
    Ok(checks)
}

fn counting_oracle() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, spec) in fixed_families()? {
        let mut mismatches = 0u32;
        for d in 1..=4 {
            let p = ProductProblem::from_family(&spec, d)?;
            let j = 30;
            let oracle = brute_force_oracle(&p, j)?;
            let floor = oracle_validity_threshold(&p, j) * (1.0 + 1e-12);
            let lead = p.leading();
            for i in 0..=8 {
                let u = f64::from(i) / 8.0;
                let t = (floor.ln() + u * (lead.ln() - floor.ln())).exp();
                let got = count_products_above(&p, t, COUNTING_CAP)?;
                if got.saturated || got.count != oracle_count(&oracle, t) {
                    mismatches += 1;
                }
            }
        }
        checks.push(Check::new(format!("{name}, d<=4, mismatches"), f64::from(mismatches), 0.0));
    }
    Ok(checks)
}

fn special() -> Result<Vec<Check>> {
    use std::f64::consts::PI;
    let x = xi0();
    let (lo, hi) = (g_function(1.2)?, g_function(1.5)?);
    Ok(vec![
        Check::new("zeta(2) = pi^2/6", (riemann_zeta(2.0)? - PI * PI / 6.0).abs(), 1e-14),
        Check::new("zeta(4) = pi^4/90", (riemann_zeta(4.0)? - PI.powi(4) / 90.0).abs(), 1e-14),
        Check::new("G(xi0) = 1", (g_function(x)? - 1.0).abs(), 1e-10),
        Check::new("G(2) = 1/2", (g_function(2.0)? - 0.5).abs(), 1e-10),
        Check::new("G(1.5) < 1 < G(1.2)", if hi < 1.0 && 1.0 < lo { 0.0 } else { 1.0 }, 0.0),
    ])
}
