mod common;

use common::boolean_fn;
use noisestab::canonical::lexicographic;
use noisestab::influence::{edge_boundary, influence, total_influence, InfluenceMethod};
use noisestab::search::ColexSubsets;
use noisestab::BooleanFunction;
use proptest::prelude::*;

proptest! {
    #[test]
    fn three_methods_agree(f in boolean_fn(1, 12)) {
        let flip = influence(&f, InfluenceMethod::Flip);
        for method in [InfluenceMethod::Fourier, InfluenceMethod::Boundary] {
            let other = influence(&f, method);
            for (a, b) in flip.per_coordinate.iter().zip(&other.per_coordinate) {
                prop_assert!((a - b).abs() <= 1e-10, "{:?}: {} vs {}", method, a, b);
            }
        }
        prop_assert!((flip.total - total_influence(&f)).abs() <= 1e-12);
    }

    #[test]
    fn complement_has_same_influence(f in boolean_fn(1, 10)) {
        prop_assert_eq!(edge_boundary(&f), edge_boundary(&f.complement()));
    }

    #[test]
    fn isoperimetric_lower_bound(f in boolean_fn(1, 12)) {
        let s = f.support_size();
        prop_assume!(s > 0);
        let bound = s as f64 * (f.n() as f64 - (s as f64).log2());
        prop_assert!(edge_boundary(&f).total as f64 >= bound - 1e-9);
    }
}

#[test]
fn lexicographic_sets_minimize_boundary() {
    for n in 1..=4usize {
        let size = 1usize << n;
        for s in 0..=size {
            let best = ColexSubsets::new(size, s)
                .map(|set| edge_boundary(&BooleanFunction::from_support(n, set).unwrap()).total)
                .min()
                .unwrap();
            let lex = edge_boundary(&lexicographic(n, s).unwrap()).total;
            assert_eq!(lex, best, "n={} s={}", n, s);
        }
    }
}
