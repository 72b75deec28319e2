mod common;

use common::{boolean_fn, EPS_GRID};
use noisestab::info::{binary_entropy, mutual_information};
use noisestab::reference::mutual_information_joint;
use proptest::prelude::*;

proptest! {
    #[test]
    fn bounded_by_output_entropy(f in boolean_fn(1, 10), eps in 0.0..=0.5f64) {
        let mi = mutual_information(&f, eps).unwrap();
        prop_assert!(mi >= 0.0);
        prop_assert!(mi <= binary_entropy(f.mean()).unwrap() + 1e-12);
    }

    #[test]
    fn non_increasing_in_noise(f in boolean_fn(1, 8)) {
        let values: Vec<f64> = EPS_GRID.iter().map(|&e| mutual_information(&f, e).unwrap()).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12, "{:?}", values);
        }
        prop_assert!(values[10].abs() <= 1e-12);
    }

    #[test]
    fn matches_joint_law(f in boolean_fn(1, 6), eps in 0.0..=0.5f64) {
        let fast = mutual_information(&f, eps).unwrap();
        prop_assert!((fast - mutual_information_joint(&f, eps).unwrap()).abs() <= 1e-12);
    }
}
