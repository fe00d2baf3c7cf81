use rand::seq::SliceRandom;
use rand::Rng;

use super::{EvalError, Regime};
use crate::graph::{is_connected, Graph, NodePair};
use crate::union_find::DisjointSet;

/// One train/test split of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalSplit {
    /// Retained edges, in the graph's canonical order.
    pub train_edges: Vec<(usize, usize)>,
    /// Hidden edges.
    pub positives: Vec<NodePair>,
    /// Sampled non-edges; empty until negatives are drawn.
    pub negatives: Vec<NodePair>,
    pub seed: u64,
    pub regime: Regime,
    pub fraction: f64,
    /// Fewer edges than requested could be hidden without disconnecting
    /// the graph.
    pub shortfall: bool,
}

impl EvalSplit {
    /// The graph on the retained edges, with the original labels.
    pub fn train_graph(&self, g: &Graph) -> Result<Graph, EvalError> {
        Ok(g.with_edges(&self.train_edges)?)
    }
}

/// `ceil(fraction * edges)`, ignoring rounding noise just above an integer
/// (so that 0.3 * 10 hides 3 edges, not 4).
pub fn hide_target(fraction: f64, edges: usize) -> usize {
    let x = fraction * edges as f64;
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * x.max(1.0) {
        nearest as usize
    } else {
        x.ceil() as usize
    }
}

/// Hides `ceil(fraction * |E|)` edges while keeping the retained graph
/// connected.
///
/// Edges are shuffled and scanned once. An edge whose endpoints are already
/// joined by retained edges is hidden (until the target is reached); every
/// other edge is retained. If fewer than the target are hideable, all
/// hideable edges are hidden and `shortfall` is set.
pub fn split_edges<R: Rng + ?Sized>(g: &Graph, fraction: f64, rng: &mut R) -> Result<EvalSplit, EvalError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(EvalError::InvalidFraction(fraction));
    }
    if !is_connected(g) {
        return Err(EvalError::Disconnected);
    }
    let target = hide_target(fraction, g.edge_count());
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);

    let mut ds = DisjointSet::new(g.node_count());
    let mut hidden = vec![false; g.edge_count()];
    let mut hidden_count = 0;
    for &e in &order {
        let (u, v) = g.edges()[e];
        if hidden_count < target && ds.connected(u, v) {
            hidden[e] = true;
            hidden_count += 1;
        } else {
            ds.union(u, v);
        }
    }
    let shortfall = hidden_count < target;
    if shortfall {
        log::warn!("split: only {hidden_count} of {target} edges can be hidden without disconnecting the graph");
    }

    let mut train_edges = Vec::with_capacity(g.edge_count() - hidden_count);
    let mut positives = Vec::with_capacity(hidden_count);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if hidden[e] {
            positives.push(NodePair::for_kind(g.kind(), u, v));
        } else {
            train_edges.push((u, v));
        }
    }
    Ok(EvalSplit {
        train_edges,
        positives,
        negatives: Vec::new(),
        seed: 0,
        regime: Regime::Uniform,
        fraction,
        shortfall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangle_hides_one_edge() {
        let g = Graph::unlabeled(GraphKind::Undirected, 3, &[(0, 1), (1, 2), (0, 2)], None).unwrap();
        for seed in 0..10 {
            let s = split_edges(&g, 1.0 / 3.0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(s.positives.len(), 1);
            assert_eq!(s.train_edges.len(), 2);
            assert!(is_connected(&s.train_graph(&g).unwrap()));
            assert!(!s.shortfall);
        }
    }

    #[test]
    fn tree_hides_nothing() {
        let g = Graph::unlabeled(GraphKind::Undirected, 4, &[(0, 1), (1, 2), (1, 3)], None).unwrap();
        let s = split_edges(&g, 0.5, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(s.positives.is_empty());
        assert!(s.shortfall);
    }

    #[test]
    fn rejects_bad_input() {
        let g = Graph::unlabeled(GraphKind::Undirected, 4, &[(0, 1), (2, 3)], None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(split_edges(&g, 0.1, &mut rng), Err(EvalError::Disconnected)));
        assert!(matches!(split_edges(&g, 1.0, &mut rng), Err(EvalError::InvalidFraction(_))));
    }

    #[test]
    fn target_rounding() {
        assert_eq!(hide_target(0.3, 10), 3);
        assert_eq!(hide_target(0.1, 6594), 660);
        assert_eq!(hide_target(1.0 / 3.0, 3), 1);
        assert_eq!(hide_target(0.1, 1417), 142);
        assert_eq!(hide_target(0.25, 3), 1);
    }
}
