mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use tractal::tract::{g_function, qpt_exponent, riemann_zeta, spt_exponent};
use tractal::{classify, Criterion, Error, ExtendedReal, FamilySpec, Interval, SequenceDescriptor as S};

fn assert_lattice(spec: &FamilySpec, c: Criterion) {
    let rep = match classify(spec, c) {
        Err(Error::UnsupportedCriterion { .. } | Error::Undecidable(_)) => return,
        other => other.unwrap(),
    };
    assert_eq!(rep.spt, rep.pt);
    assert_eq!(rep.qpt, rep.uwt);
    assert_eq!(rep.uwt, rep.wt);
    assert_eq!(rep.curse, rep.wt.map(|w| !w));
    for t in [1.01, 2.0, 10.0] {
        assert_eq!(rep.st_wt(0.3, t), Some(true));
    }
    if rep.spt == Some(true) {
        assert_eq!(rep.qpt, Some(true));
        assert!(rep.p_star.is_some());
    }
}

fn rate() -> impl Strategy<Value = ExtendedReal> {
    prop_oneof![
        Just(ExtendedReal::INFINITY),
        (1e-6f64..50.0).prop_map(ExtendedReal::finite),
    ]
}

fn tau0() -> impl Strategy<Value = Interval> {
    (0.0f64..2.0, 0.0f64..1.0).prop_map(|(lo, w)| {
        Interval::new(ExtendedReal::finite(lo), ExtendedReal::finite(lo + w)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn implication_lattice(spec in common::family()) {
        assert_lattice(&spec, Criterion::Nor);
        assert_lattice(&spec, Criterion::Abs);
    }

    #[test]
    fn exponents_monotone_in_rate(a in rate(), b in rate(), t in tau0()) {
        let (small, large) = if a.total_cmp(&b).is_le() { (a, b) } else { (b, a) };
        let p_small = spt_exponent(small, t).unwrap();
        let p_large = spt_exponent(large, t).unwrap();
        prop_assert!(p_large.lo.total_cmp(&p_small.lo).is_le());
        prop_assert!(p_large.hi.total_cmp(&p_small.hi).is_le());
        let q_small = qpt_exponent(small, t).unwrap();
        let q_large = qpt_exponent(large, t).unwrap();
        prop_assert!(q_large.hi.total_cmp(&q_small.hi).is_le());
        prop_assert!(p_small.lo.value() >= 2.0 * t.lo.value());
    }
}

#[test]
fn lattice_on_hand_picked_families() {
    let two_pi = 2.0 * PI;
    let specs = [
        FamilySpec::euler(S::constant(0.0)).unwrap(),
        FamilySpec::euler(S::log_growth(1.0)).unwrap(),
        FamilySpec::wiener(S::constant(2.0)).unwrap(),
        FamilySpec::wiener(S::log_growth(1.0)).unwrap(),
        FamilySpec::korobov(S::constant(1.0), S::constant(1.0)).unwrap(),
        FamilySpec::korobov(S::log_growth(1.0), S::exponential(1.0, two_pi, -2.0, S::log_growth(1.0))).unwrap(),
        FamilySpec::gaussian(S::constant(1.0)).unwrap(),
        FamilySpec::gaussian(S::power(1.0, -2.0)).unwrap(),
        FamilySpec::analytic_korobov(0.5, S::constant(1.0), S::constant(1.0)).unwrap(),
        FamilySpec::analytic_korobov(0.5, S::power(1.0, 1.0), S::constant(1.0)).unwrap(),
    ];
    for spec in &specs {
        assert_lattice(spec, Criterion::Nor);
        assert_lattice(spec, Criterion::Abs);
    }
}

#[test]
fn g_strictly_decreasing() {
    let grid: Vec<f64> = (0..=300).map(|i| 1.05 + i as f64 * (10.0 - 1.05) / 300.0).collect();
    let g: Vec<f64> = grid.iter().map(|&x| g_function(x).unwrap()).collect();
    for (i, w) in g.windows(2).enumerate() {
        assert!(w[1] < w[0], "x = {}", grid[i + 1]);
    }
}

#[test]
fn zeta_values() {
    assert!((riemann_zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
    assert!((riemann_zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
}
