use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{EvalError, Regime};
use crate::graph::{Graph, GraphKind, NodePair, Side};

/// Rejection sampling gives up after this many draws per requested pair.
pub const MAX_ATTEMPTS_PER_SAMPLE: usize = 100;

/// Ordered pairs `(u, v)` with `v -> u` an edge and `u -> v` not an edge.
pub fn difficult_pairs(g: &Graph) -> Vec<NodePair> {
    if g.kind() != GraphKind::Directed {
        return Vec::new();
    }
    g.edges().iter().filter(|&&(u, v)| !g.has_edge(v, u)).map(|&(u, v)| NodePair::ordered(v, u)).collect()
}

/// Draws non-edges of a graph under a sampling regime.
///
/// The pair universe follows the graph: unordered pairs for undirected
/// graphs, ordered pairs for directed graphs and left-right pairs for
/// bipartite graphs. Degree weights default to the degrees of the graph
/// itself.
#[derive(Clone, Debug)]
pub struct NegativeSampler<'a> {
    graph: &'a Graph,
    regime: Regime,
    degrees: Vec<usize>,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl<'a> NegativeSampler<'a> {
    pub fn new(graph: &'a Graph, regime: Regime) -> Result<Self, EvalError> {
        let required = match regime {
            Regime::Uniform => None,
            Regime::BipartiteWeighted => Some(GraphKind::Bipartite),
            Regime::DirectedDifficult => Some(GraphKind::Directed),
        };
        if let Some(expected) = required {
            if graph.kind() != expected {
                return Err(EvalError::RegimeMismatch { regime, expected, found: graph.kind() });
            }
        }
        let n = graph.node_count();
        let degrees = (0..n).map(|u| graph.total_degree(u)).collect();
        let (left, right) = match graph.partition() {
            Some(p) => (0..n).partition(|&u| p[u] == Side::Left),
            None => (Vec::new(), Vec::new()),
        };
        Ok(NegativeSampler { graph, regime, degrees, left, right })
    }

    /// Uses other degrees (for example those of the training graph) for
    /// the degree-weighted half.
    pub fn with_degrees(mut self, degrees: Vec<usize>) -> Self {
        assert_eq!(degrees.len(), self.graph.node_count(), "one degree per node");
        self.degrees = degrees;
        self
    }

    fn universe(&self) -> usize {
        let n = self.graph.node_count();
        match self.graph.kind() {
            GraphKind::Undirected => n * n.saturating_sub(1) / 2,
            GraphKind::Directed => n * n.saturating_sub(1),
            GraphKind::Bipartite => self.left.len() * self.right.len(),
        }
    }

    /// `count` distinct pairs that are not edges of the graph.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<Vec<NodePair>, EvalError> {
        let available = self.universe() - self.graph.edge_count();
        if count > available {
            return Err(EvalError::InsufficientNonEdges { needed: count, available });
        }
        let mut draw = Draw { graph: self.graph, seen: HashSet::with_capacity(count), out: Vec::with_capacity(count) };
        let mut budget = Budget { left: MAX_ATTEMPTS_PER_SAMPLE * count, used: 0, needed: count };
        let special = count / 2;

        match self.regime {
            Regime::Uniform => {}
            Regime::BipartiteWeighted => {
                let weights = |side: &[usize]| WeightedIndex::new(side.iter().map(|&u| self.degrees[u]));
                match (weights(&self.left), weights(&self.right)) {
                    (Ok(wl), Ok(wr)) => {
                        while draw.out.len() < special {
                            budget.spend(draw.out.len())?;
                            let (l, r) = (self.left[wl.sample(rng)], self.right[wr.sample(rng)]);
                            draw.offer(NodePair::unordered(l, r));
                        }
                    }
                    _ => log::warn!("negatives: a side has no positive degree; sampling uniformly"),
                }
            }
            Regime::DirectedDifficult => {
                let pool = difficult_pairs(self.graph);
                if pool.is_empty() {
                    log::warn!("negatives: no difficult pairs; sampling uniformly");
                } else if pool.len() < special {
                    log::warn!("negatives: only {} difficult pairs for {special} slots; filling uniformly", pool.len());
                }
                for &pair in pool.choose_multiple(rng, special.min(pool.len())) {
                    draw.offer(pair);
                }
            }
        }

        let n = self.graph.node_count();
        while draw.out.len() < count {
            budget.spend(draw.out.len())?;
            let pair = match self.graph.kind() {
                GraphKind::Bipartite => NodePair::unordered(
                    *self.left.choose(rng).expect("non-empty side"),
                    *self.right.choose(rng).expect("non-empty side"),
                ),
                kind => {
                    let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    if u == v {
                        continue;
                    }
                    NodePair::for_kind(kind, u, v)
                }
            };
            draw.offer(pair);
        }
        Ok(draw.out)
    }
}

struct Draw<'g> {
    graph: &'g Graph,
    seen: HashSet<NodePair>,
    out: Vec<NodePair>,
}

impl Draw<'_> {
    fn offer(&mut self, pair: NodePair) {
        if !self.graph.contains_pair(pair) && self.seen.insert(pair) {
            self.out.push(pair);
        }
    }
}

struct Budget {
    left: usize,
    used: usize,
    needed: usize,
}

impl Budget {
    fn spend(&mut self, found: usize) -> Result<(), EvalError> {
        if self.left == 0 {
            return Err(EvalError::SamplingExhausted { attempts: self.used, found, needed: self.needed });
        }
        self.left -= 1;
        self.used += 1;
        Ok(())
    }
}

/// Samples `count` non-edges of `g` under `regime`, weighting by the
/// degrees of `g`.
pub fn sample_negatives<R: Rng + ?Sized>(
    g: &Graph,
    count: usize,
    regime: Regime,
    rng: &mut R,
) -> Result<Vec<NodePair>, EvalError> {
    NegativeSampler::new(g, regime)?.sample(count, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complete_graph_has_no_negatives() {
        let edges: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        let g = Graph::unlabeled(GraphKind::Undirected, 5, &edges, None).unwrap();
        let err = sample_negatives(&g, 1, Regime::Uniform, &mut ChaCha8Rng::seed_from_u64(0)).unwrap_err();
        assert!(matches!(err, EvalError::InsufficientNonEdges { needed: 1, available: 0 }));
    }

    #[test]
    fn single_directed_edge_yields_its_reverse() {
        // A -> B plus an isolated C, so a uniform non-edge exists besides (B, A).
        let g = Graph::unlabeled(GraphKind::Directed, 3, &[(0, 1)], None).unwrap();
        assert_eq!(difficult_pairs(&g), vec![NodePair::ordered(1, 0)]);
        for seed in 0..20 {
            let neg = sample_negatives(&g, 2, Regime::DirectedDifficult, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(neg[0], NodePair::ordered(1, 0));
            assert!(neg[1] != neg[0] && !g.contains_pair(neg[1]));
        }
    }

    #[test]
    fn weighted_half_skips_degree_zero_nodes() {
        // K_{1,3} (centre 0, leaves 2..5) plus left node 1 joined to leaf 2
        // and an isolated right node 5.
        let partition = vec![Side::Left, Side::Left, Side::Right, Side::Right, Side::Right, Side::Right];
        let g = Graph::unlabeled(GraphKind::Bipartite, 6, &[(0, 2), (0, 3), (0, 4), (1, 2)], Some(partition)).unwrap();
        let sampler = NegativeSampler::new(&g, Regime::BipartiteWeighted).unwrap();
        let mut uniform_hits = 0;
        for seed in 0..200 {
            let neg = sampler.sample(4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert!(neg[..2].iter().all(|p| p.u != 5 && p.v != 5));
            uniform_hits += neg[2..].iter().filter(|p| p.v == 5).count();
        }
        assert!(uniform_hits > 0, "the uniform half does reach the isolated node");
    }

    #[test]
    fn regime_must_match_kind() {
        let g = Graph::unlabeled(GraphKind::Undirected, 3, &[(0, 1)], None).unwrap();
        assert!(matches!(NegativeSampler::new(&g, Regime::DirectedDifficult), Err(EvalError::RegimeMismatch { .. })));
    }
}
