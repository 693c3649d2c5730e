mod common;

use proptest::prelude::*;
use tractal::oracle::brute_force_trace;
use tractal::products::{
    brute_force_oracle, count_products_above, count_products_above_parallel, oracle_count,
    oracle_validity_threshold, product_eigenvalues_top, trace_sum, COUNTING_CAP,
};
use tractal::ProductProblem;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn top_m_equals_oracle_head(spec in common::family(), d in 1usize..=5) {
        let p = ProductProblem::from_family(&spec, d).unwrap();
        let j = common::oracle_box(d);
        let oracle = brute_force_oracle(&p, j).unwrap();
        let valid = oracle_count(&oracle, oracle_validity_threshold(&p, j)) as usize;
        let m = valid.min(500);
        let top = product_eigenvalues_top(&p, m).unwrap();
        for (i, (a, b)) in top.iter().zip(&oracle[..m]).enumerate() {
            prop_assert_eq!(a.to_bits(), b.to_bits(), "position {}", i);
        }
    }

    #[test]
    fn counts_equal_oracle_counts(spec in common::family(), d in 1usize..=5, picks in prop::collection::vec(0.0f64..1.0, 6)) {
        let p = ProductProblem::from_family(&spec, d).unwrap();
        let j = common::oracle_box(d);
        let oracle = brute_force_oracle(&p, j).unwrap();
        let floor = oracle_validity_threshold(&p, j) * (1.0 + 1e-12);
        let lead = p.leading();
        for u in picks {
            // log-uniform between the validity floor and just above the top
            let t = (floor.ln() + u * ((lead * 1.01).ln() - floor.ln())).exp();
            let c = count_products_above(&p, t, COUNTING_CAP).unwrap();
            prop_assert!(!c.saturated);
            prop_assert_eq!(c.count, oracle_count(&oracle, t), "T = {}", t);
        }
        // thresholds equal to an eigenvalue exercise the strict inequality
        let n_valid = oracle_count(&oracle, floor) as usize;
        if n_valid > 0 {
            let t = oracle[n_valid / 2];
            prop_assert_eq!(count_products_above(&p, t, COUNTING_CAP).unwrap().count, oracle_count(&oracle, t));
        }
    }

    #[test]
    fn trace_identity(spec in common::family(), d in 1usize..=3, tau_i in 0usize..3) {
        let tau = [0.8, 1.0, 2.0][tau_i];
        let p = ProductProblem::from_family(&spec, d).unwrap();
        let fast = trace_sum(&p, tau, 1e-12).unwrap();
        let brute = brute_force_trace(&p, tau, 30).unwrap();
        prop_assert!((fast / brute - 1.0).abs() <= 1e-9, "{} vs {}", fast, brute);
    }

    #[test]
    fn counts_monotone_and_top_sorted(spec in common::family(), d in 1usize..=6, mut ts in prop::collection::vec(1e-4f64..1.0, 8)) {
        let p = ProductProblem::from_family(&spec, d).unwrap();
        let top = product_eigenvalues_top(&p, 300).unwrap();
        prop_assert!(top.windows(2).all(|w| w[1] <= w[0]));
        ts.sort_by(f64::total_cmp);
        let lead = p.leading();
        let counts: Vec<u64> = ts
            .iter()
            .map(|&u| count_products_above(&p, u * lead, COUNTING_CAP).unwrap().count)
            .collect();
        prop_assert!(counts.windows(2).all(|w| w[1] <= w[0]), "{:?}", counts);
    }

    #[test]
    fn permutation_covariance(spec in common::family(), d in 2usize..=5, seed in any::<u64>(), u in 1e-3f64..1.0) {
        use rand::seq::SliceRandom;
        let p = ProductProblem::from_family(&spec, d).unwrap();
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(&mut common::rng(seed));
        let q = p.permuted(&perm).unwrap();
        let a = product_eigenvalues_top(&p, 200).unwrap();
        let b = product_eigenvalues_top(&q, 200).unwrap();
        for (x, y) in a.iter().zip(&b) {
            // products of the same factors in another order differ by rounding only
            prop_assert!((x - y).abs() <= 4.0 * f64::EPSILON * x.abs() * d as f64);
        }
        // thresholds away from any product so rounding cannot flip a comparison
        let t = u * p.leading();
        let near = a.iter().any(|v| ((v - t) / t).abs() < 1e-12);
        if !near {
            let ca = count_products_above(&p, t, COUNTING_CAP).unwrap();
            let cb = count_products_above(&q, t, COUNTING_CAP).unwrap();
            prop_assert_eq!(ca, cb);
        }
    }

    #[test]
    fn parallel_count_matches_sequential(spec in common::family(), d in 1usize..=8, u in 1e-4f64..1.0) {
        let p = ProductProblem::from_family(&spec, d).unwrap();
        let t = u * p.leading();
        prop_assert_eq!(
            count_products_above(&p, t, COUNTING_CAP).unwrap(),
            count_products_above_parallel(&p, t, COUNTING_CAP).unwrap()
        );
    }
}
