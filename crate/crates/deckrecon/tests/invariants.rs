//! Property tests for the serialization, canonical-form, and counting
//! invariants that every other module leans on.

use proptest::prelude::*;

use deckrecon::canon::canonical_certificate;
use deckrecon::deck::{deal, deck_equal};
use deckrecon::graph::{emit_graph6, parse_graph6, Graph};

/// A graph strategy: order plus an edge bitmask over the upper triangle.
fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let bits = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), bits).prop_map(move |edges| {
            let mut g = Graph::empty(n);
            let mut idx = 0;
            for v in 1..n {
                for u in 0..v {
                    if edges[idx] {
                        g.add_edge(u, v);
                    }
                    idx += 1;
                }
            }
            g
        })
    })
}

fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn graph6_round_trip(g in arb_graph(24)) {
        let line = emit_graph6(&g);
        prop_assert_eq!(parse_graph6(&line).unwrap(), g);
    }

    #[test]
    fn certificate_is_relabeling_invariant(g in arb_graph(10)) {
        let n = g.order();
        let cert = canonical_certificate(&g);
        let reversed: Vec<usize> = (0..n).rev().collect();
        prop_assert_eq!(canonical_certificate(&g.relabeled(&reversed)), cert);
    }

    #[test]
    fn decks_of_relabelings_are_equal(
        (g, perm) in arb_graph(9)
            .prop_filter("need a card to deal", |g| g.order() >= 2)
            .prop_flat_map(|g| {
                let n = g.order();
                (Just(g), arb_permutation(n))
            })
    ) {
        let h = g.relabeled(&perm);
        prop_assert!(deck_equal(deal(&g).cards(), deal(&h).cards()));
    }

    #[test]
    fn clique_degree_handshake((g, r) in arb_graph(11).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), 1..=n)
    })) {
        let n = g.order();
        let total: u128 = (0..n).map(|v| g.clique_degree(v, r)).sum();
        prop_assert_eq!(total, r as u128 * g.count_cliques(r));
    }

    #[test]
    fn full_deck_card_sum((g, r) in arb_graph(10).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), 1..n.max(2))
    })) {
        let n = g.order();
        prop_assume!(n >= 2 && r <= n - 1);
        let card_sum: u128 = (0..n).map(|v| g.delete_vertex(v).count_cliques(r)).sum();
        prop_assert_eq!((n - r) as u128 * g.count_cliques(r), card_sum);
    }
}
