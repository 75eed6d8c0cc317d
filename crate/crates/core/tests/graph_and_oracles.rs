use proptest::prelude::*;
use shortreach::graph::{integerize_weights, VertexSubset, WeightedDiGraph};
use shortreach::oracles::{bfs_reach, dijkstra, k_bounded_distances, transitive_closure};

fn arb_graph(max_n: usize, max_w: u32) -> impl Strategy<Value = WeightedDiGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 0..=max_w), 0..(3 * n)).prop_map(move |edges| {
            WeightedDiGraph::from_edges(n, edges.into_iter().map(|(u, v, w)| (u, v, w as f64))).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn induced_subgraph_keeps_exactly_internal_edges(
        g in arb_graph(12, 5),
        mask in any::<u16>(),
    ) {
        let members: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        let subset = VertexSubset::new(members.clone(), g.n()).unwrap();
        let (sub, map) = g.induced_subgraph(&subset).unwrap();
        let mut got: Vec<(usize, usize, f64)> = sub
            .edges()
            .map(|(u, v, w)| (map.global(u), map.global(v), w))
            .collect();
        got.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let expected: Vec<(usize, usize, f64)> = g
            .edges()
            .filter(|&(u, v, _)| members.contains(&u) && members.contains(&v))
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn skeleton_symmetrizes(g in arb_graph(12, 3)) {
        let s = g.skeleton();
        for u in 0..g.n() {
            for v in 0..g.n() {
                let expect = u != v && (g.has_edge(u, v) || g.has_edge(v, u));
                prop_assert_eq!(s.has_edge(u, v), expect);
            }
        }
    }

    #[test]
    fn integerized_distances_within_one_plus_xi(
        g in arb_graph(50, 1000),
        xi_idx in 0usize..4,
    ) {
        let xi = [1.0, 0.5, 0.25, 0.1][xi_idx];
        let ints = integerize_weights(&g, xi).unwrap();
        for s in 0..g.n().min(10) {
            let d = dijkstra(&g, s).unwrap().dist;
            let di = dijkstra(&ints.graph, s).unwrap().dist;
            for v in 0..g.n() {
                prop_assert_eq!(d[v].is_finite(), di[v].is_finite());
                if d[v].is_finite() {
                    let scaled = di[v] * ints.unit;
                    prop_assert!(scaled >= d[v] * (1.0 - 1e-9));
                    prop_assert!(scaled <= (1.0 + xi) * d[v] * (1.0 + 1e-9));
                }
            }
        }
    }

    #[test]
    fn closure_rows_match_bfs(g in arb_graph(40, 1)) {
        let tc = transitive_closure(&g, 512).unwrap();
        for s in 0..g.n() {
            let reach = bfs_reach(&g, s).unwrap();
            let row: Vec<usize> = tc.row_ones(s).collect();
            prop_assert_eq!(row.as_slice(), reach.as_slice());
        }
    }

    #[test]
    fn k_bounded_is_monotone_and_converges(g in arb_graph(20, 9)) {
        let n = g.n();
        for s in 0..n {
            let mut prev = k_bounded_distances(&g, s, 0).unwrap().dist;
            for k in 1..n {
                let cur = k_bounded_distances(&g, s, k).unwrap().dist;
                prop_assert!(cur.iter().zip(&prev).all(|(c, p)| c <= p));
                prev = cur;
            }
            prop_assert_eq!(prev, dijkstra(&g, s).unwrap().dist);
        }
    }
}

#[test]
fn integerize_examples() {
    let g = WeightedDiGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 2.5)]).unwrap();
    let ints = integerize_weights(&g, 0.5).unwrap();
    let w: Vec<f64> = ints.graph.edges().map(|e| e.2).collect();
    assert_eq!(w, vec![2.0, 5.0]);
    assert_eq!(ints.max_weight, 5);

    let g = WeightedDiGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 3.0)]).unwrap();
    let ints = integerize_weights(&g, 0.25).unwrap();
    let w: Vec<f64> = ints.graph.edges().map(|e| e.2).collect();
    assert_eq!(w, vec![4.0, 12.0]);
    assert_eq!(ints.max_weight, 12);

    let unit = WeightedDiGraph::from_unweighted(2, [(0, 1)]).unwrap();
    assert_eq!(integerize_weights(&unit, 1.0).unwrap().graph, unit);
    assert!(integerize_weights(&unit, 0.0).is_err());
}

#[test]
fn aspect_ratio_ignores_zero_weights() {
    let g = WeightedDiGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 100.0), (2, 0, 0.0)]).unwrap();
    assert_eq!(g.aspect_ratio(), 100.0);
}
