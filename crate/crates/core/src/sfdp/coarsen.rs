use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, GraphKind};

/// One step of the coarsening hierarchy.
#[derive(Clone, Debug)]
pub struct CoarseningLevel {
    /// Coarse graph (always undirected, unlabeled).
    pub graph: Graph,
    /// Fine node index to coarse node index.
    pub mapping: Vec<usize>,
    /// Number of fine edges merged into each coarse edge, aligned with
    /// `graph.edges()`.
    pub multiplicity: Vec<u32>,
}

impl CoarseningLevel {
    /// Fine nodes mapped to each coarse node.
    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.graph.node_count()];
        for (fine, &coarse) in self.mapping.iter().enumerate() {
            out[coarse].push(fine);
        }
        out
    }
}

/// Contracts a randomized maximal matching of `g`.
///
/// Nodes are visited in random order; each unmatched node is paired with a
/// uniformly chosen unmatched neighbour, if any. Directed edges are treated
/// as undirected.
pub fn coarsen<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> CoarseningLevel {
    let ones = vec![1u32; g.edge_count()];
    let c = contract(g.node_count(), g.edges(), &ones, rng);
    let graph = Graph::unlabeled(GraphKind::Undirected, c.node_count, &c.edges, None)
        .expect("contracted edges are canonical and loop-free");
    CoarseningLevel { graph, mapping: c.mapping, multiplicity: c.weights }
}

pub(crate) struct Contraction {
    pub node_count: usize,
    pub mapping: Vec<usize>,
    /// Canonical `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub weights: Vec<u32>,
}

pub(crate) fn contract<R: Rng + ?Sized>(
    n: usize,
    edges: &[(usize, usize)],
    weights: &[u32],
    rng: &mut R,
) -> Contraction {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut free = Vec::new();
    for &u in &order {
        if mate[u].is_some() {
            continue;
        }
        free.clear();
        free.extend(adj[u].iter().copied().filter(|&v| v != u && mate[v].is_none()));
        free.sort_unstable();
        free.dedup();
        if let Some(&v) = free.choose(rng) {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
    }

    // Coarse ids in order of the smallest fine index of each group.
    let mut mapping = vec![usize::MAX; n];
    let mut next = 0;
    for u in 0..n {
        if mapping[u] != usize::MAX {
            continue;
        }
        mapping[u] = next;
        if let Some(v) = mate[u] {
            mapping[v] = next;
        }
        next += 1;
    }

    let mut merged: Vec<((usize, usize), u32)> = edges
        .iter()
        .zip(weights)
        .filter_map(|(&(u, v), &w)| {
            let (a, b) = (mapping[u], mapping[v]);
            (a != b).then(|| ((a.min(b), a.max(b)), w))
        })
        .collect();
    merged.sort_unstable_by_key(|&(e, _)| e);
    let mut out_edges: Vec<(usize, usize)> = Vec::with_capacity(merged.len());
    let mut out_weights: Vec<u32> = Vec::with_capacity(merged.len());
    for (e, w) in merged {
        if out_edges.last() == Some(&e) {
            *out_weights.last_mut().unwrap() += w;
        } else {
            out_edges.push(e);
            out_weights.push(w);
        }
    }
    Contraction { node_count: next, mapping, edges: out_edges, weights: out_weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_connected;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::unlabeled(GraphKind::Undirected, n, edges, None).unwrap()
    }

    #[test]
    fn single_edge_collapses() {
        let level = coarsen(&graph(2, &[(0, 1)]), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(level.graph.node_count(), 1);
        assert_eq!(level.graph.edge_count(), 0);
        assert_eq!(level.mapping, vec![0, 0]);
    }

    #[test]
    fn path_of_three() {
        for seed in 0..20 {
            let level = coarsen(&graph(3, &[(0, 1), (1, 2)]), &mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(level.graph.node_count(), 2);
            assert_eq!(level.graph.edge_count(), 1);
            assert_eq!(level.multiplicity, vec![1]);
        }
    }

    #[test]
    fn parallel_edges_merge_with_multiplicity() {
        // Square 0-1-2-3-0: a perfect matching leaves two coarse nodes joined twice.
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        for seed in 0..20 {
            let level = coarsen(&g, &mut ChaCha8Rng::seed_from_u64(seed));
            let total: u32 = level.multiplicity.iter().sum();
            let internal = g.edges().iter().filter(|&&(u, v)| level.mapping[u] == level.mapping[v]).count();
            assert_eq!(total as usize + internal, 4);
        }
    }

    #[test]
    fn matching_is_maximal_and_partitions_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 60;
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        for _ in 0..40 {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                edges.push((a.min(b), a.max(b)));
            }
        }
        let g = graph(n, &edges);
        let level = coarsen(&g, &mut rng);
        let pre = level.preimages();
        assert_eq!(pre.iter().map(Vec::len).sum::<usize>(), n);
        assert!(pre.iter().all(|p| !p.is_empty() && p.len() <= 2));
        assert!(level.graph.node_count() < n);
        assert!(is_connected(&level.graph));
        // Maximal: no edge joins two singleton groups.
        for &(u, v) in g.edges() {
            assert!(pre[level.mapping[u]].len() == 2 || pre[level.mapping[v]].len() == 2);
        }
    }
}
