use noisestab::canonical::{is_monotone, lexicographic, majority, noise_at_all_ones};
use noisestab::influence::edge_boundary;
use noisestab::noise::apply_noise;
use noisestab::search::{binomial, enumerate_functions, maximize, Constraint, Objective, SearchSpec};
use noisestab::BooleanFunction;

#[test]
fn enumeration_count_is_binomial() {
    for n in 1..=4usize {
        for s in 0..=(1usize << n) {
            let spec = SearchSpec::new(n, Constraint::SupportSize(s), Objective::Degree1Weight);
            let mut count = 0u128;
            for f in enumerate_functions(&spec).unwrap() {
                assert_eq!(f.support_size(), s);
                count += 1;
            }
            assert_eq!(count, binomial(1 << n, s as u128));
        }
    }
}

#[test]
fn monotone_restriction_keeps_the_optimum() {
    for n in 1..=4usize {
        for s in 1..(1usize << n) {
            for objective in [
                Objective::AlphaStability { alpha: 2.0, eps: 0.2 },
                Objective::AlphaStability { alpha: 4.0, eps: 0.1 },
            ] {
                let all = maximize(&SearchSpec::new(n, Constraint::SupportSize(s), objective.clone())).unwrap();
                let mono =
                    maximize(&SearchSpec::new(n, Constraint::SupportSize(s), objective).monotone_only()).unwrap();
                assert!((all.best_value - mono.best_value).abs() <= 1e-12, "n={} s={}", n, s);
                assert!(mono.argmax.iter().all(is_monotone));
            }
        }
    }
}

#[test]
fn agreement_is_complement_symmetric() {
    let n = 4;
    for s in 0..=8usize {
        let obj = Objective::Agreement { k: 3, eps: 0.15 };
        let a = maximize(&SearchSpec::new(n, Constraint::SupportSize(s), obj.clone())).unwrap();
        let b = maximize(&SearchSpec::new(n, Constraint::SupportSize(16 - s), obj)).unwrap();
        assert!((a.best_value - b.best_value).abs() <= 1e-12, "s={}", s);
        assert_eq!(a.argmax_count, b.argmax_count);
    }
}

#[test]
fn weak_noise_optimizers_minimize_boundary() {
    let n = 4;
    for s in 1..16usize {
        let spec = SearchSpec::new(n, Constraint::SupportSize(s), Objective::AlphaStability { alpha: 2.0, eps: 1e-3 })
            .stream_all();
        let result = maximize(&spec).unwrap();
        let best = edge_boundary(&lexicographic(n, s).unwrap()).total;
        for f in &result.argmax {
            assert_eq!(edge_boundary(f).total, best, "s={} table={}", s, f.to_hex());
        }
        assert!(result.argmax_count >= 1);
    }
}

#[test]
fn monotone_functions_peak_at_all_ones() {
    for n in 1..=4usize {
        let top = (1usize << n) - 1;
        for bits in 0u64..(1u64 << (1 << n)) {
            let f = BooleanFunction::from_fn(n, |x| bits >> x & 1 == 1).unwrap();
            if !is_monotone(&f) {
                continue;
            }
            for eps in [0.1, 0.26, 0.4] {
                let t = apply_noise(&f.to_cube_function(), eps);
                let max = t.values().iter().cloned().fold(f64::MIN, f64::max);
                assert!((t.values()[top] - max).abs() <= 1e-12);
                assert!((noise_at_all_ones(&f, eps) - t.values()[top]).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn odd_majorities_are_balanced_and_monotone() {
    for n in [1usize, 3, 5, 7, 9] {
        for r in (1..=n).step_by(2) {
            let m = majority(n, r).unwrap();
            assert!(m.is_balanced());
            assert!(is_monotone(&m));
        }
    }
}
