#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tractal::spectra::{TabulatedSpec, TailModel};
use tractal::{FamilySpec, SequenceDescriptor as S};

/// Per-dimension box used by the brute-force oracles: `30^d` up to `d = 4`,
/// `20^5` beyond (30^5 exceeds the oracle limit).
pub fn oracle_box(d: usize) -> u64 {
    if d <= 4 {
        30
    } else {
        20
    }
}

fn round3(v: f64) -> f64 {
    (v * 1e3).round() / 1e3
}

/// A random family with exact spectra and trace sums convergent for `tau >= 0.8`.
pub fn random_family(rng: &mut ChaCha8Rng, kind: usize) -> FamilySpec {
    match kind % 6 {
        0 => {
            let r = if rng.gen_bool(0.5) {
                S::constant(rng.gen_range(0..=2) as f64)
            } else {
                S::log_growth(rng.gen_range(0.3..1.2))
            };
            FamilySpec::euler(r).unwrap()
        }
        1 => FamilySpec::wiener(S::constant(0.0)).unwrap(),
        2 => {
            let r0 = round3(rng.gen_range(0.7..2.5));
            let r = if rng.gen_bool(0.5) {
                S::constant(r0)
            } else {
                S::power(r0, rng.gen_range(0.0..1.0))
            };
            let g0 = rng.gen_range(0.05..=1.0);
            let g = if rng.gen_bool(0.5) {
                S::constant(g0)
            } else {
                S::power(g0, -rng.gen_range(0.0..2.0))
            };
            FamilySpec::korobov(r, g).unwrap()
        }
        3 => {
            let c = rng.gen_range(0.05..5.0);
            let gamma2 = if rng.gen_bool(0.5) {
                S::constant(c)
            } else {
                S::power(c, -rng.gen_range(0.0..2.0))
            };
            FamilySpec::gaussian(gamma2).unwrap()
        }
        4 => {
            let a0 = rng.gen_range(0.3..2.0);
            let a = if rng.gen_bool(0.5) {
                S::constant(a0)
            } else {
                S::power(a0, rng.gen_range(0.0..1.0))
            };
            let b = S::constant(rng.gen_range(0.5..2.0));
            FamilySpec::analytic_korobov(rng.gen_range(0.1..0.9), a, b).unwrap()
        }
        _ => {
            let tables = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let mut t: Vec<f64> =
                        (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(0.01..1.0)).collect();
                    t.sort_by(|a, b| b.total_cmp(a));
                    t
                })
                .collect();
            let tail = if rng.gen_bool(0.5) {
                TailModel::Geometric {
                    ratio: rng.gen_range(0.1..0.9),
                }
            } else {
                TailModel::Power {
                    exponent: rng.gen_range(1.6..4.0),
                }
            };
            FamilySpec::custom_tabulated(TabulatedSpec {
                tables,
                tail: Some(tail),
                tau0: None,
                h: None,
            })
            .unwrap()
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Any family, driven by a seed so proptest can replay failures.
pub fn family() -> impl Strategy<Value = FamilySpec> {
    (any::<u64>(), 0usize..6).prop_map(|(seed, kind)| random_family(&mut rng(seed), kind))
}

/// Families whose `H(k, tau)` is nonincreasing in `k` by construction.
pub fn monotone_family() -> impl Strategy<Value = FamilySpec> {
    (any::<u64>(), 0usize..5).prop_map(|(seed, kind)| random_family(&mut rng(seed), kind))
}
