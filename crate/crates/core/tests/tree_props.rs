mod common;

use std::collections::BTreeMap;

use noisestab::noise::{agreement_probability, correlation_star};
use noisestab::tree::{
    path_dictator_bound, tree_agreement, tree_correlation, tree_correlation_rooted, tree_mc_estimate,
    BroadcastTree, PlayerAssignment,
};
use noisestab::BooleanFunction;
use proptest::prelude::*;

/// Random tree on `vertices` vertices: vertex `v > 0` hangs off a parent below it.
fn random_tree() -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>)> {
    (2usize..=8).prop_flat_map(|vertices| {
        let edges: Vec<_> = (1..vertices)
            .map(|v| (0..v, 0.0..=0.5f64).prop_map(move |(u, eps)| (u, v, eps)))
            .collect();
        (Just(vertices), edges)
    })
}

fn random_players(vertices: usize, n: usize) -> impl Strategy<Value = BTreeMap<usize, BooleanFunction>> {
    proptest::collection::btree_map(
        0..vertices,
        proptest::collection::vec(any::<bool>(), 1 << n)
            .prop_map(move |bits| BooleanFunction::from_fn(n, |x| bits[x]).unwrap()),
        1..=vertices,
    )
}

proptest! {
    #[test]
    fn correlation_is_root_independent(
        (vertices, edges, players) in random_tree().prop_flat_map(|(v, e)| (Just(v), Just(e), random_players(v, 3)))
    ) {
        let tree = BroadcastTree::new(vertices, edges).unwrap();
        let a = PlayerAssignment::new(players).unwrap();
        let base = tree_correlation(&tree, &a).unwrap();
        for root in 0..vertices {
            prop_assert!((tree_correlation_rooted(&tree, &a, root).unwrap() - base).abs() <= 1e-12);
        }
        prop_assert!((0.0..=1.0 + 1e-12).contains(&base));
    }

    #[test]
    fn star_matches_closed_form(
        fs in proptest::collection::vec(
            proptest::collection::vec(any::<bool>(), 16)
                .prop_map(|bits| BooleanFunction::from_fn(4, |x| bits[x]).unwrap()),
            1..=4,
        ),
        eps in 0.0..=0.5f64,
    ) {
        let tree = BroadcastTree::star(fs.len(), eps).unwrap();
        let players = fs.iter().enumerate().map(|(i, f)| (i + 1, f.clone())).collect();
        let a = PlayerAssignment::new(players).unwrap();
        prop_assert!((tree_correlation(&tree, &a).unwrap() - correlation_star(&fs, eps).unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn star_agreement_is_agreement_probability() {
    let f = BooleanFunction::from_support(3, [1, 2, 4, 7]).unwrap();
    for k in 2..=5u32 {
        let tree = BroadcastTree::star(k as usize, 0.2).unwrap();
        let a = PlayerAssignment::uniform(1..=k as usize, &f).unwrap();
        let expected = agreement_probability(&f, k, 0.2).unwrap();
        assert!((tree_agreement(&tree, &a).unwrap() - expected).abs() <= 1e-12);
    }
}

#[test]
fn path_dictators_match_product_formula() {
    let d = BooleanFunction::from_fn(2, |x| x & 1 == 1).unwrap();
    let tree = BroadcastTree::path(6, 0.15).unwrap();
    let positions = [0usize, 2, 3, 6];
    let a = PlayerAssignment::uniform(positions, &d).unwrap();
    let expected = path_dictator_bound(&[2, 1, 3], 0.15).unwrap();
    assert!((tree_correlation(&tree, &a).unwrap() - expected).abs() <= 1e-12);
}

#[test]
fn monte_carlo_is_reproducible_and_close() {
    let tree = BroadcastTree::with_uniform_eps(5, &[(0, 1), (1, 2), (1, 3), (3, 4)], 0.1).unwrap();
    let f = BooleanFunction::from_support(3, [3, 5, 6, 7]).unwrap();
    let a = PlayerAssignment::uniform([0, 2, 4], &f).unwrap();
    let exact = tree_correlation(&tree, &a).unwrap();
    let first = tree_mc_estimate(&tree, &a, 200_000, 7).unwrap();
    let second = tree_mc_estimate(&tree, &a, 200_000, 7).unwrap();
    assert_eq!(first, second);
    assert!((first.estimate - exact).abs() <= 5.0 * first.standard_error.max(1e-4));
}
