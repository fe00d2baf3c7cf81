use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spring_lp::baselines::{adamic_adar, common_neighbors, neighborhood_size, preferential_attachment};
use spring_lp::graph::GraphKind;
use spring_lp::{Graph, Side};

fn random_graph(seed: u64, n: usize, m: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> =
        (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).filter(|(a, b)| a != b).collect();
    Graph::unlabeled(GraphKind::Undirected, n, &edges, None).unwrap()
}

/// Neighbourhood sets rebuilt from the raw edge list.
fn brute_sets(g: &Graph) -> Vec<BTreeSet<usize>> {
    let mut sets = vec![BTreeSet::new(); g.node_count()];
    for &(u, v) in g.edges() {
        sets[u].insert(v);
        sets[v].insert(u);
    }
    sets
}

proptest! {
    #[test]
    fn indices_match_brute_force_and_are_symmetric(seed in any::<u64>(), n in 2usize..30, m in 0usize..100) {
        let g = random_graph(seed, n, m);
        let sets = brute_sets(&g);
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let common: Vec<usize> = sets[u].intersection(&sets[v]).copied().collect();
                let cn = common_neighbors(&g, u, v);
                prop_assert_eq!(cn, common.len());
                prop_assert_eq!(cn, common_neighbors(&g, v, u));
                prop_assert!(cn <= sets[u].len().min(sets[v].len()));
                let aa = adamic_adar(&g, u, v);
                let brute: f64 = common.iter().map(|&z| 1.0 / sets[z].len() as f64).sum();
                prop_assert!((aa - brute).abs() <= 1e-12);
                prop_assert_eq!(aa, adamic_adar(&g, v, u));
                prop_assert!(aa <= cn as f64 / 2.0 + 1e-12);
                let pa = preferential_attachment(&g, u, v);
                prop_assert_eq!(pa, sets[u].len() * sets[v].len());
                prop_assert_eq!(pa, preferential_attachment(&g, v, u));
            }
        }
    }

    #[test]
    fn cross_partition_pairs_share_no_neighbours(seed in any::<u64>(), left in 1usize..15, right in 1usize..15, m in 0usize..80) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = left + right;
        let partition: Vec<Side> = (0..n).map(|i| if i < left { Side::Left } else { Side::Right }).collect();
        let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..left), left + rng.gen_range(0..right))).collect();
        let g = Graph::unlabeled(GraphKind::Bipartite, n, &edges, Some(partition)).unwrap();
        for u in 0..left {
            for v in left..n {
                prop_assert_eq!(common_neighbors(&g, u, v), 0);
                prop_assert_eq!(adamic_adar(&g, u, v), 0.0);
            }
            prop_assert_eq!(neighborhood_size(&g, u), g.total_degree(u));
        }
    }
}
