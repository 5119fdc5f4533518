use std::collections::BTreeSet;

use proptest::prelude::*;
use turanlab_core::covering::{
    build_special_covering, enumerate_covering_types, t_density, t_resolution, Density, ResolutionOptions,
};
use turanlab_core::density::{fe_density_closed_form, is_two_balanced, two_density};
use turanlab_core::graph::contains_subgraph;
use turanlab_core::Graph;

fn graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let all = Graph::complete(n).edges();
            let edges: Vec<_> = all.iter().zip(bits).filter(|(_, b)| *b).map(|(e, _)| *e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

/// A graph with no isolated vertex and at least two edges.
fn pattern(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    graph(lo, hi).prop_map(|g| g.without_isolated()).prop_filter("two edges", |g| g.edge_count() >= 2)
}

fn balanced(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    pattern(lo, hi).prop_filter("2-balanced", |g| is_two_balanced(g).unwrap())
}

/// Small targets: `(P4, diamond)` alone has over 10^5 covering types.
fn small_target() -> impl Strategy<Value = Graph> {
    pattern(3, 4).prop_filter("at most four edges", |h| h.edge_count() <= 4)
}

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn two_density_dominates_subgraphs(h in pattern(3, 7), keep in any::<u64>()) {
        let sub = h.induced(keep & h.vertex_mask()).without_isolated();
        prop_assume!(sub.edge_count() >= 2);
        prop_assert!(two_density(&h).unwrap().value >= two_density(&sub).unwrap().value);
    }

    #[test]
    fn fe_density_closed_form_matches_special_covering(t in balanced(3, 5), h in pattern(3, 5)) {
        let closed = fe_density_closed_form(&t, &h).unwrap();
        let direct = t_density(&build_special_covering(&t, &h).unwrap()).unwrap().value;
        prop_assert_eq!(direct, Density::Finite(closed));
    }

    #[test]
    fn fe_density_lies_between_the_two_densities(t in balanced(3, 5), h in pattern(3, 5)) {
        let (mt, mh) = (two_density(&t).unwrap().value, two_density(&h).unwrap().value);
        let fe = fe_density_closed_form(&t, &h).unwrap();
        if mh <= mt {
            prop_assert!(fe <= mt);
        }
        if mh < mt {
            prop_assert!(mh < fe && fe < mt, "m2(H) {} fe {} m2(T) {}", mh, fe, mt);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn covering_types_ignore_labels(
        (t, pt) in balanced(3, 4).prop_flat_map(|t| { let n = t.vertex_count(); (Just(t), perm(n)) }),
        (h, ph) in small_target().prop_flat_map(|h| { let n = h.vertex_count(); (Just(h), perm(n)) }),
    ) {
        let a: Vec<_> = enumerate_covering_types(&t, &h).unwrap().into_iter().map(|ty| ty.canonical).collect();
        let b: Vec<_> = enumerate_covering_types(&t.permuted(&pt), &h.permuted(&ph))
            .unwrap()
            .into_iter()
            .map(|ty| ty.canonical)
            .collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn enumerated_coverings_are_valid(t in balanced(3, 4), h in small_target()) {
        for ty in enumerate_covering_types(&t, &h).unwrap() {
            let copies = ty.representative.copies();
            let mut seen = BTreeSet::new();
            for c in copies {
                for &e in c.edges() {
                    prop_assert!(seen.insert(e), "copies share an edge");
                }
            }
            let union = ty.representative.union_graph();
            prop_assert!(contains_subgraph(&h, &union));
            prop_assert_eq!(ty.minimal, ty.representative.is_minimal());
            // F^e is kept even when no choice of arcs makes it minimal
            if !ty.minimal {
                prop_assert!(ty.special);
            } else if copies.len() > 1 {
                for skip in 0..copies.len() {
                    let rest: Vec<_> = copies.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, c)| c.clone()).collect();
                    let g = turanlab_core::covering::underlying_graph(&rest);
                    prop_assert!(!contains_subgraph(&h, &g), "not minimal");
                }
            }
        }
    }

    #[test]
    fn resolution_is_sorted_below_fe(t in balanced(3, 4), h in small_target()) {
        let Ok(r) = t_resolution(&t, &h, ResolutionOptions::default()) else {
            return Ok(());
        };
        prop_assert!(r.densities.windows(2).all(|w| w[0] <= w[1]));
        let fe = fe_density_closed_form(&t, &h).unwrap();
        prop_assert!(r.densities.iter().all(|&d| d <= fe));
        prop_assert!(r.fe_type().density() == Some(Density::Finite(fe)));
    }
}
