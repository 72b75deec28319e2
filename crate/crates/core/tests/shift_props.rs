mod common;

use common::boolean_fn;
use noisestab::canonical::is_monotone;
use noisestab::noise::{phi_stability, PhiSpec};
use noisestab::shift::{monotonize, monotonize_with, potential};
use proptest::prelude::*;

proptest! {
    #[test]
    fn monotonize_preserves_size_and_is_monotone(f in boolean_fn(1, 10)) {
        let (g, trace) = monotonize(&f);
        prop_assert_eq!(g.support_size(), f.support_size());
        prop_assert!(is_monotone(&g));
        prop_assert_eq!(trace.final_potential, potential(&g));
        let moved: u64 = trace.steps.iter().map(|s| s.moved as u64).sum();
        prop_assert_eq!(potential(&g) - potential(&f), moved);
        prop_assert!(trace.passes <= f.n() << f.n());
    }

    #[test]
    fn shifts_never_lower_stability(f in boolean_fn(1, 8), eps in 0.01..0.49f64) {
        let phis = [PhiSpec::power(2.0).unwrap(), PhiSpec::power(3.5).unwrap(), PhiSpec::EntropyPair];
        let mut ok = true;
        monotonize_with(&f, |_, before, after| {
            for phi in &phis {
                let a = phi_stability(before, phi, eps).unwrap();
                let b = phi_stability(after, phi, eps).unwrap();
                ok &= b >= a - 1e-12;
            }
        });
        prop_assert!(ok);
    }

    #[test]
    fn monotone_input_is_fixed(f in boolean_fn(1, 8)) {
        let (g, _) = monotonize(&f);
        let (h, trace) = monotonize(&g);
        prop_assert_eq!(h, g);
        prop_assert!(trace.steps.is_empty());
    }
}
