mod common;

use proptest::prelude::*;
use tractal::complexity::{info_complexity, lemma_bound, minimal_error};
use tractal::products::{product_eigenvalues_top, COUNTING_CAP};
use tractal::{ComplexityQuery, Criterion, FamilySpec, ProductProblem, SequenceDescriptor as S};

const EPS_GRID: [f64; 5] = [0.9, 0.7, 0.5, 0.3, 0.1];

fn criterion() -> impl Strategy<Value = Criterion> {
    prop_oneof![Just(Criterion::Abs), Just(Criterion::Nor)]
}

fn count(p: &ProductProblem, eps: f64, c: Criterion) -> tractal::ComplexityResult {
    let q = ComplexityQuery::new(eps, p.d(), c).unwrap();
    info_complexity(p, &q, COUNTING_CAP).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nonincreasing_in_epsilon(spec in common::family(), d in 1usize..=4, c in criterion()) {
        let p = ProductProblem::from_family(&spec, d).unwrap();
        let n: Vec<u64> = EPS_GRID.iter().map(|&e| count(&p, e, c).n).collect();
        // the grid runs from large to small epsilon
        prop_assert!(n.windows(2).all(|w| w[0] <= w[1]), "{:?}", n);
    }

    #[test]
    fn nor_scale_invariance(
        spec in common::family(),
        d in 1usize..=5,
        scales in prop::collection::vec(1e-6f64..=10.0, 5),
        eps in 0.05f64..0.95,
    ) {
        let p = ProductProblem::from_family(&spec, d).unwrap();
        let q = p.scaled(&scales[..d]).unwrap();
        prop_assert_eq!(count(&p, eps, Criterion::Nor).n, count(&q, eps, Criterion::Nor).n);
    }

    #[test]
    fn lemma_bound_dominates(spec in common::family(), d in 1usize..=4, tau_i in 0usize..3) {
        let tau = [0.8, 1.0, 2.0][tau_i];
        let p = ProductProblem::from_family(&spec, d).unwrap();
        for &e in &EPS_GRID {
            let n = count(&p, e, Criterion::Nor).n;
            let bound = lemma_bound(&p, e, tau).unwrap();
            prop_assert!(bound >= n, "eps={} tau={}: {} < {}", e, tau, bound, n);
        }
    }

    #[test]
    fn minimal_error_brackets_complexity(spec in common::family(), d in 1usize..=4, eps in 0.05f64..0.95) {
        let p = ProductProblem::from_family(&spec, d).unwrap();
        let r = count(&p, eps, Criterion::Nor);
        prop_assume!(r.n < 200_000);
        let normalized = p.normalized();
        let top = product_eigenvalues_top(&normalized, r.n as usize + 1).unwrap();
        let eps2 = eps * eps;
        prop_assert!(top[r.n as usize] <= eps2);
        if r.n >= 1 {
            prop_assert!(top[r.n as usize - 1] > eps2);
        }
        let cri = p.leading().sqrt();
        let slack = 1e-12;
        prop_assert!(minimal_error(&p, r.n).unwrap() <= eps * cri * (1.0 + slack));
        if r.n >= 1 {
            prop_assert!(minimal_error(&p, r.n - 1).unwrap() > eps * cri * (1.0 - slack));
        }
    }
}

#[test]
fn curse_witness_unit_weights() {
    for r in [0.75, 1.0, 2.0] {
        let spec = FamilySpec::korobov(S::constant(r), S::constant(1.0)).unwrap();
        for d in 1..=12 {
            let p = ProductProblem::from_family(&spec, d).unwrap();
            for eps in [0.9, 0.5, 0.1] {
                let n = count(&p, eps, Criterion::Nor);
                assert!(n.n >= (1u64 << d) - 1, "r={r} d={d} eps={eps}: {}", n.n);
            }
        }
    }
}
