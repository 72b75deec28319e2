#![allow(dead_code)]

use noisestab::BooleanFunction;
use proptest::prelude::*;

/// Boolean functions with `n` in `lo..=hi`.
pub fn boolean_fn(lo: usize, hi: usize) -> impl Strategy<Value = BooleanFunction> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), 1 << n)
            .prop_map(move |bits| BooleanFunction::from_fn(n, |x| bits[x]).unwrap())
    })
}

/// Two functions of a shared dimension.
pub fn boolean_pair(lo: usize, hi: usize) -> impl Strategy<Value = (BooleanFunction, BooleanFunction)> {
    (lo..=hi).prop_flat_map(|n| {
        let table = proptest::collection::vec(any::<bool>(), 1 << n);
        (table.clone(), table).prop_map(move |(a, b)| {
            (
                BooleanFunction::from_fn(n, |x| a[x]).unwrap(),
                BooleanFunction::from_fn(n, |x| b[x]).unwrap(),
            )
        })
    })
}

pub fn channel_eps() -> impl Strategy<Value = f64> {
    0.0..=0.5f64
}

pub const EPS_GRID: [f64; 11] = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5];
