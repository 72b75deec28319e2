mod common;

use common::boolean_fn;
use noisestab::cube::{boolean_spectrum, degree_weight, wht, wht_inverse};
use noisestab::influence::{influence, InfluenceMethod};
use noisestab::{BooleanFunction, CubeFunction};
use proptest::prelude::*;

proptest! {
    #[test]
    fn wht_round_trip(values in (1usize..=10).prop_flat_map(|n| proptest::collection::vec(-3.0..3.0f64, 1 << n))) {
        let n = values.len().trailing_zeros() as usize;
        let f = CubeFunction::new(n, values).unwrap();
        prop_assert!(wht_inverse(&wht(&f)).max_abs_diff(&f) <= 1e-12);
    }

    #[test]
    fn parseval_and_degree_weights(f in boolean_fn(1, 10)) {
        let s = boolean_spectrum(&f);
        prop_assert!((s.energy() - f.mean()).abs() <= 1e-12);
        let total: f64 = (0..=f.n()).map(|d| degree_weight(&s, d)).sum();
        prop_assert!((total - f.mean()).abs() <= 1e-12);
        prop_assert!((s.coeff(0) - f.mean()).abs() <= 1e-15);
    }

    #[test]
    fn degree_one_bound(f in boolean_fn(1, 10)) {
        let m = f.mean();
        prop_assert!(degree_weight(&boolean_spectrum(&f), 1) <= m - m * m + 1e-12);
    }

    #[test]
    fn total_influence_is_spectral_level_sum(f in boolean_fn(1, 10)) {
        let s = boolean_spectrum(&f);
        let spectral: f64 = (1..=f.n()).map(|d| 4.0 * d as f64 * degree_weight(&s, d)).sum();
        prop_assert!((influence(&f, InfluenceMethod::Flip).total - spectral).abs() <= 1e-10);
    }

    #[test]
    fn hex_round_trip(f in boolean_fn(1, 12)) {
        prop_assert_eq!(BooleanFunction::from_hex(f.n(), &f.to_hex()).unwrap(), f.clone());
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<BooleanFunction>(&json).unwrap(), f);
    }
}

#[test]
fn parseval_exhaustive_small() {
    for n in 1..=3usize {
        for t in 0u64..1 << (1 << n) {
            let f = BooleanFunction::from_words(n, vec![t]).unwrap();
            assert!((boolean_spectrum(&f).energy() - f.mean()).abs() <= 1e-12);
        }
    }
}
