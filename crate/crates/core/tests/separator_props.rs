use proptest::prelude::*;
use shortreach::generators::{random_connected_skeleton, random_sparse_digraph, WeightSpec};
use shortreach::graph::Skeleton;
use shortreach::separator::{
    balance_to_half, build_decomposition_tree, make_doubly_incident, DecompositionTree,
    SeparatorFinder, SeparatorResult, SeparatorStrategy, TreeConfig,
};

fn finder(strategy: SeparatorStrategy) -> SeparatorFinder {
    SeparatorFinder::new(strategy, 2.0 / 3.0).unwrap()
}

/// Every node's parts are checked edge by edge, independently of `validate`.
fn assert_tree_sound(skel: &Skeleton, t: &DecompositionTree) {
    let root = &t.nodes[t.root];
    assert_eq!(root.vset.len(), skel.n());
    assert!(root.boundary.is_empty());
    for (id, node) in t.nodes.iter().enumerate() {
        let Some([c1, c2]) = node.children else {
            assert_eq!(node.level, 0);
            continue;
        };
        let u1: Vec<usize> = t.nodes[c1].vset.iter().filter(|&v| !node.sep.contains(v)).collect();
        let u2: Vec<usize> = t.nodes[c2].vset.iter().filter(|&v| !node.sep.contains(v)).collect();
        for &a in &u1 {
            for &b in &u2 {
                assert!(!skel.has_edge(a, b), "node {id}: edge {a}-{b} crosses");
            }
        }
        assert_eq!(u1.len() + u2.len() + node.sep.len(), node.vset.len());
        for c in [c1, c2] {
            let mut expect: Vec<usize> = node.sep.iter().collect();
            expect.extend(node.boundary.iter().filter(|&v| t.nodes[c].vset.contains(v)));
            expect.sort_unstable();
            expect.dedup();
            assert_eq!(t.nodes[c].boundary.as_slice(), expect.as_slice());
            assert!(node.sep.iter().all(|v| t.nodes[c].vset.contains(v)));
        }
        assert_eq!(node.level, 1 + t.nodes[c1].level.max(t.nodes[c2].level));
        // doubly incident separators
        for s in node.sep.iter() {
            assert!(skel.neighbors(s).iter().any(|v| u1.contains(v)));
            assert!(skel.neighbors(s).iter().any(|v| u2.contains(v)));
        }
    }
    t.validate(skel).unwrap();
}

#[test]
fn trees_are_sound_on_random_graphs() {
    for seed in 0..40u64 {
        let n = 8 + (seed as usize * 13) % 57;
        let g = random_sparse_digraph(n, n / 3, WeightSpec::Unit, seed);
        let skel = g.skeleton();
        for tau in [1, 3, 8] {
            let config = TreeConfig {
                leaf_threshold: tau,
                ..TreeConfig::default()
            };
            let t = build_decomposition_tree(&skel, &finder(SeparatorStrategy::BfsHeuristic), &config)
                .unwrap();
            assert_tree_sound(&skel, &t);
            if n <= 20 {
                let t = build_decomposition_tree(&skel, &finder(SeparatorStrategy::Exhaustive), &config)
                    .unwrap();
                assert_tree_sound(&skel, &t);
            }
        }
    }
}

#[test]
fn grid_trees_are_sound_and_rebalanced_trees_too() {
    let g = shortreach::generators::grid_digraph(8, 8, WeightSpec::Unit, 1);
    let skel = g.skeleton();
    for rebalance in [false, true] {
        let config = TreeConfig {
            leaf_threshold: 4,
            rebalance,
            ..TreeConfig::default()
        };
        let t = build_decomposition_tree(
            &skel,
            &finder(SeparatorStrategy::Grid { rows: 8, cols: 8 }),
            &config,
        )
        .unwrap();
        assert_tree_sound(&skel, &t);
        if !rebalance {
            assert!(t.depth() >= 5);
        }
    }
}

#[test]
fn balance_loop_invariants_on_random_connected_graphs() {
    let f = finder(SeparatorStrategy::Exhaustive);
    for seed in 0..60u64 {
        let n = 2 + (seed as usize * 7) % 39;
        let skel = random_connected_skeleton(n, n / 4, seed);
        let all: Vec<usize> = (0..n).collect();
        let out = balance_to_half(&skel, &all, &f).unwrap();
        for w in out.steps.windows(2) {
            assert!(w[1].d.len() as f64 <= f.lambda * w[0].d.len() as f64 + 1e-9);
            assert!(w[1].d.len() < w[0].d.len());
        }
        for st in &out.steps {
            let mut everything: Vec<usize> = st.a.iter().chain(st.b.iter()).chain(st.c.iter()).chain(st.d.iter()).collect();
            everything.sort_unstable();
            assert_eq!(everything, all);
            for (x, y) in [(&st.a, &st.b), (&st.a, &st.d), (&st.b, &st.d)] {
                assert!(x.iter().all(|u| skel.neighbors(u).iter().all(|&v| !y.contains(v))));
            }
            assert!(st.a.len() <= st.b.len());
            assert!(st.b.len() <= st.a.len() + st.c.len() + st.d.len());
        }
        let s = &out.separator;
        assert!(s.part_a.len() <= n.div_ceil(2) && s.part_b.len() <= n.div_ceil(2));
        assert!(s.is_separator_of(&skel, &all));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn doubly_incident_rewrite_is_sound(
        n in 3usize..25,
        seed in any::<u64>(),
        extra in 0usize..10,
    ) {
        let skel = random_connected_skeleton(n, extra, seed);
        let all: Vec<usize> = (0..n).collect();
        let split = finder(SeparatorStrategy::BfsHeuristic).find(&skel, &all).unwrap();
        let out = make_doubly_incident(&skel, &split);
        prop_assert!(out.is_separator_of(&skel, &all));
        prop_assert!(out.part_a.len() <= split.part_a.len() + split.sep.len());
        prop_assert!(out.part_b.len() <= split.part_b.len() + split.sep.len());
        for s in out.sep.iter() {
            prop_assert!(skel.neighbors(s).iter().any(|&v| out.part_a.contains(v)));
            prop_assert!(skel.neighbors(s).iter().any(|&v| out.part_b.contains(v)));
        }
    }

    #[test]
    fn finders_return_valid_separators(
        n in 2usize..18,
        seed in any::<u64>(),
        extra in 0usize..20,
    ) {
        let skel = random_connected_skeleton(n, extra, seed);
        let all: Vec<usize> = (0..n).collect();
        for strategy in [SeparatorStrategy::Exhaustive, SeparatorStrategy::BfsHeuristic] {
            let r: SeparatorResult = finder(strategy).find(&skel, &all).unwrap();
            prop_assert!(r.is_separator_of(&skel, &all));
            prop_assert!(r.ratio <= 2.0 / 3.0 + 1e-12);
        }
    }
}
