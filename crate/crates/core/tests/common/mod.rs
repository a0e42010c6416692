#![allow(dead_code)]

use mabuchi_core::exact::rat;
use mabuchi_core::{AdmissibleManifold, BaseFactor, BigRational, Sign};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `s` just above the Fano bound for the given sign.
fn einstein_constant(
    d0: u32,
    d_inf: u32,
    sign: Sign,
    excess_num: i64,
    excess_den: i64,
) -> BigRational {
    let bound = match sign {
        Sign::Plus => d0 + 1,
        Sign::Minus => d_inf + 1,
    };
    rat(bound as i64, 1) + rat(excess_num, excess_den)
}

fn build(d0: u32, d_inf: u32, raw: &[(u32, bool, i64, i64)]) -> AdmissibleManifold {
    let factors = raw
        .iter()
        .map(|&(dim, plus, num, den)| {
            let sign = if plus { Sign::Plus } else { Sign::Minus };
            BaseFactor::new(dim, sign, einstein_constant(d0, d_inf, sign, num, den)).unwrap()
        })
        .collect();
    AdmissibleManifold::new(d0, d_inf, factors).expect("generated input is Fano")
}

/// Deterministic multi-factor inputs with both signs present in each.
pub fn random_general_manifolds(count: usize, seed: u64) -> Vec<AdmissibleManifold> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d0 = rng.random_range(0..=3);
            let d_inf = rng.random_range(0..=3);
            let n_factors = rng.random_range(2..=4);
            let raw: Vec<_> = (0..n_factors)
                .map(|i| {
                    // first two factors carry opposite signs
                    let plus = match i {
                        0 => true,
                        1 => false,
                        _ => rng.random_bool(0.5),
                    };
                    (
                        rng.random_range(1..=3),
                        plus,
                        rng.random_range(1..=9),
                        rng.random_range(1..=7),
                    )
                })
                .collect();
            build(d0, d_inf, &raw)
        })
        .collect()
}

/// Fano admissible manifolds with up to three factors of either sign.
pub fn general_manifold() -> impl Strategy<Value = AdmissibleManifold> {
    (
        0u32..=3,
        0u32..=3,
        prop::collection::vec((1u32..=3, any::<bool>(), 1i64..=12, 1i64..=8), 0..=3),
    )
        .prop_map(|(d0, d_inf, raw)| build(d0, d_inf, &raw))
}

/// Fano P^n bundle tuples `(n, k, d0, d_inf)`.
pub fn pn_tuple(n_max: u32) -> impl Strategy<Value = (u32, u32, u32, u32)> {
    (1..=n_max, 1u32..=6, 0u32..=4, 0u32..=4)
        .prop_filter("Fano", |&(n, k, d0, _)| k * (d0 + 1) < n + 1)
}
