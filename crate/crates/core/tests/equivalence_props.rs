mod common;

use common::{arb_apg, mostowski, naive_bisimulation, partition_matches};
use hyperset::apg::{quotient, Apg};
use hyperset::equivalence::{counting_partition, finsler_partition, max_bisimulation};
use hyperset::gen::{random_apg, random_large, random_well_founded, rng};
use proptest::prelude::*;

#[test]
fn bisimulation_matches_naive_fixpoint() {
    let mut r = rng(21);
    for _ in 0..1000 {
        let g = random_apg(&mut r, 40, 0.08);
        let fast = max_bisimulation(&g);
        assert!(partition_matches(fast.class_ids(), &naive_bisimulation(&g)), "{g:?}");
    }
}

#[test]
fn bisimulation_on_larger_graphs() {
    let mut r = rng(22);
    for _ in 0..20 {
        let g = random_large(&mut r, 120, 200);
        assert!(partition_matches(
            max_bisimulation(&g).class_ids(),
            &naive_bisimulation(&g)
        ));
    }
}

#[test]
fn refinement_chain() {
    let mut r = rng(23);
    for _ in 0..1000 {
        let g = random_apg(&mut r, 12, 0.2);
        let fin = finsler_partition(&g).unwrap();
        let cnt = counting_partition(&g);
        let bis = max_bisimulation(&g);
        assert!(fin.refines(&cnt), "{g:?}");
        assert!(cnt.refines(&bis), "{g:?}");
    }
}

#[test]
fn well_founded_bisimulation_is_the_collapse() {
    let mut r = rng(24);
    for _ in 0..1000 {
        let g = random_well_founded(&mut r, 12, 0.3);
        let (value, _) = mostowski(&g);
        let bis = max_bisimulation(&g);
        for u in g.nodes() {
            for v in g.nodes() {
                assert_eq!(bis.same_class(u, v), value[u] == value[v]);
            }
        }
        // on extensional inputs nothing merges in any partition
        if g.extensionality_witness().is_none() {
            assert!(bis.is_discrete());
            assert!(counting_partition(&g).is_discrete());
            assert!(finsler_partition(&g).unwrap().is_discrete());
        }
    }
}

#[test]
fn single_pass_partitions_differ_on_non_extensional_input() {
    // r -> {x, y}, x -> {e1, e2}, y -> {e1}: x and y both denote {0}
    let g = Apg::from_edges(5, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3)], 0).unwrap();
    assert!(max_bisimulation(&g).same_class(1, 2));
    assert!(!counting_partition(&g).same_class(1, 2));
}

proptest! {
    #[test]
    fn bisimulation_quotient_is_strongly_extensional(g in arb_apg(14)) {
        let (q, _) = quotient(&g, &max_bisimulation(&g));
        prop_assert!(max_bisimulation(&q).is_discrete());
    }

    #[test]
    fn partitions_are_invariant(g in arb_apg(10), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..g.node_count()).collect();
        perm.shuffle(&mut rng(seed));
        let h = g.permuted(&perm);
        let (pg, ph) = (counting_partition(&g), counting_partition(&h));
        let (bg, bh) = (max_bisimulation(&g), max_bisimulation(&h));
        let (fg, fh) = (finsler_partition(&g).unwrap(), finsler_partition(&h).unwrap());
        for u in g.nodes() {
            for v in g.nodes() {
                prop_assert_eq!(pg.same_class(u, v), ph.same_class(perm[u], perm[v]));
                prop_assert_eq!(bg.same_class(u, v), bh.same_class(perm[u], perm[v]));
                prop_assert_eq!(fg.same_class(u, v), fh.same_class(perm[u], perm[v]));
            }
        }
    }

    #[test]
    fn counting_classes_have_equal_counts(g in arb_apg(12)) {
        let p = counting_partition(&g);
        let profile = |v: usize| {
            let mut c = vec![0usize; p.class_count()];
            for &k in g.children(v) {
                c[p.class_of(k)] += 1;
            }
            c
        };
        for u in g.nodes() {
            for v in g.nodes() {
                if p.same_class(u, v) {
                    prop_assert_eq!(profile(u), profile(v));
                }
            }
        }
    }

    #[test]
    fn finsler_classes_are_isomorphism_classes(g in arb_apg(8)) {
        let p = finsler_partition(&g).unwrap();
        for u in g.nodes() {
            for v in g.nodes() {
                let iso = common::brute_isomorphic(&g.sub_apg(u), &g.sub_apg(v));
                prop_assert_eq!(p.same_class(u, v), iso);
            }
        }
    }
}
