use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spring_lp::graph::GraphKind;
use spring_lp::sfdp::layout_single_level;
use spring_lp::variants::{
    bi_sfdp_layout, bipartite_repulsion_mask, di_score, directed_to_bipartite, orient_by_degree, DiEmbedding,
};
use spring_lp::{Graph, Layout, SfdpParams, Side};

/// Left nodes a, b, c are tied pairwise by three helper users; two twin
/// users link to all of a, b, c.
fn twin_graph() -> Graph {
    // 0..3: a, b, c (left); 3..5: twins; 5..8: helpers (right)
    let mut partition = vec![Side::Left; 3];
    partition.extend([Side::Right; 5]);
    let edges = [(0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4), (0, 5), (1, 5), (1, 6), (2, 6), (2, 7), (0, 7)];
    Graph::unlabeled(GraphKind::Bipartite, 8, &edges, Some(partition)).unwrap()
}

#[test]
fn users_with_identical_links_collapse_under_bi_sfdp() {
    let g = twin_graph();
    let params = SfdpParams { max_iters: 2000, ..Default::default() };
    for seed in 0..5 {
        let (layout, _) = bi_sfdp_layout(&g, &params.clone().with_seed(seed)).unwrap();
        assert!(layout.distance(3, 4) < 0.05, "seed {seed}: {}", layout.distance(3, 4));
    }
}

#[test]
fn plain_sfdp_keeps_the_twins_apart() {
    let g = twin_graph();
    let params = SfdpParams { max_iters: 2000, ..Default::default() };
    for seed in 0..5 {
        let init = Layout::random_uniform(8, 2, 8f64.sqrt(), &mut ChaCha8Rng::seed_from_u64(seed));
        let (layout, _) = layout_single_level(&g, &init, &params, None).unwrap();
        assert!(layout.distance(3, 4) > 0.2, "seed {seed}: {}", layout.distance(3, 4));
    }
}

#[test]
fn three_cycle_true_edges_beat_reversed_pairs() {
    let g = Graph::unlabeled(GraphKind::Directed, 3, &[(0, 1), (1, 2), (2, 0)], None).unwrap();
    for seed in 0..5 {
        let model = DiEmbedding::fit(&g, &SfdpParams::default().with_seed(seed)).unwrap();
        let forward = (di_score(&model, 0, 1) + di_score(&model, 1, 2) + di_score(&model, 2, 0)) / 3.0;
        let backward = (di_score(&model, 1, 0) + di_score(&model, 2, 1) + di_score(&model, 0, 2)) / 3.0;
        assert!(forward > backward, "seed {seed}: {forward} <= {backward}");
        assert_ne!(di_score(&model, 0, 1), di_score(&model, 1, 0));
    }
}

#[test]
fn coincident_split_nodes_score_zero() {
    let g = Graph::unlabeled(GraphKind::Directed, 2, &[(0, 1)], None).unwrap();
    let model = DiEmbedding::fit(&g, &SfdpParams::default()).unwrap();
    // The only surviving pair is (0_out, 1_in); a score is never above 0.
    assert!(di_score(&model, 0, 1) <= 0.0);
    assert!(di_score(&model, 0, 1) > model.fallback_score());
}

fn random_directed(seed: u64, n: usize, m: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> =
        (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).filter(|(a, b)| a != b).collect();
    Graph::unlabeled(GraphKind::Directed, n, &edges, None).unwrap()
}

proptest! {
    #[test]
    fn split_round_trip_recovers_edges(seed in any::<u64>(), n in 2usize..40, m in 0usize..120) {
        let g = random_directed(seed, n, m);
        let (split, map) = directed_to_bipartite(&g).unwrap();
        prop_assert_eq!(split.node_count(), 2 * n);
        prop_assert_eq!(split.edge_count(), g.edge_count());
        let mut merged: Vec<(usize, usize)> = split
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (u, su) = map.original(a);
                let (v, sv) = map.original(b);
                assert_eq!((su, sv), (Side::Left, Side::Right));
                (u, v)
            })
            .collect();
        merged.sort_unstable();
        prop_assert_eq!(merged.as_slice(), g.edges());
    }

    #[test]
    fn mask_keeps_every_edge_attracting_and_blocks_same_side(seed in any::<u64>(), n in 2usize..40, m in 0usize..120) {
        let g = random_directed(seed, n, m);
        let (split, _) = directed_to_bipartite(&g).unwrap();
        let mask = bipartite_repulsion_mask(&split).unwrap();
        for &(a, b) in split.edges() {
            prop_assert!(mask.repels(a, b));
        }
        for a in 0..split.node_count() {
            for b in 0..split.node_count() {
                prop_assert_eq!(mask.repels(a, b), split.side(a) != split.side(b));
            }
        }
    }

    #[test]
    fn orientation_follows_degree_and_keeps_edges(seed in any::<u64>(), n in 2usize..40, m in 0usize..120) {
        let g = random_directed(seed, n, m).undirected_projection();
        let o = orient_by_degree(&g).unwrap();
        prop_assert_eq!(o.kind(), GraphKind::Directed);
        prop_assert_eq!(o.edge_count(), g.edge_count());
        for &(u, v) in o.edges() {
            prop_assert!(g.has_edge(u, v));
            let (du, dv) = (g.total_degree(u), g.total_degree(v));
            prop_assert!(du < dv || (du == dv && u < v));
        }
    }
}
