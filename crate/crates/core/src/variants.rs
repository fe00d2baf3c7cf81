//! Bipartite and directed variants of the spring-electrical model.
//!
//! Bi-SFDP drops repulsion between nodes on the same side of a bipartite
//! graph. Di-SFDP splits every node of a directed graph into an "out" copy
//! and an "in" copy, lays out the resulting bipartite graph with Bi-SFDP and
//! scores an ordered pair `(u, v)` by the distance from `u_out` to `v_in`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{induced_subgraph, is_connected, largest_component_nodes, Graph, GraphError, GraphKind, Side};
use crate::sfdp::{layout_single_level, Layout, LevelReport, RepulsionMask, SfdpError, SfdpParams};

/// Mask under which only left-right pairs repel.
pub fn bipartite_repulsion_mask(g: &Graph) -> Result<RepulsionMask, GraphError> {
    let partition = match (g.kind(), g.partition()) {
        (GraphKind::Bipartite, Some(p)) => p,
        _ => return Err(GraphError::WrongKind { expected: GraphKind::Bipartite, found: g.kind() }),
    };
    Ok(RepulsionMask::by_class(partition.iter().map(|s| (*s == Side::Right) as u8).collect()))
}

/// Bi-SFDP layout of a connected bipartite graph.
///
/// Runs a single level from uniform random positions in a box of side
/// `K sqrt(n)`; no coarsening is done because matched pairs always straddle
/// the partition.
pub fn bi_sfdp_layout(g: &Graph, params: &SfdpParams) -> Result<(Layout, LevelReport), SfdpError> {
    params.validate()?;
    let mask = bipartite_repulsion_mask(g)?;
    if !is_connected(g) {
        return Err(SfdpError::Disconnected);
    }
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let init = Layout::random_uniform(n, params.dim, params.natural_length * (n as f64).sqrt(), &mut rng);
    layout_single_level(g, &init, params, Some(&mask))
}

/// Correspondence between a directed graph and its split bipartite graph.
///
/// Node `u` maps to `u_out = u` on the left and `u_in = n + u` on the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitNodeMap {
    node_count: usize,
}

impl SplitNodeMap {
    pub fn new(node_count: usize) -> Self {
        SplitNodeMap { node_count }
    }

    /// Nodes in the original directed graph.
    pub fn original_count(&self) -> usize {
        self.node_count
    }

    pub fn out_node(&self, u: usize) -> usize {
        assert!(u < self.node_count);
        u
    }

    pub fn in_node(&self, u: usize) -> usize {
        assert!(u < self.node_count);
        self.node_count + u
    }

    /// Original node and side of a split node.
    pub fn original(&self, split: usize) -> (usize, Side) {
        assert!(split < 2 * self.node_count);
        if split < self.node_count {
            (split, Side::Left)
        } else {
            (split - self.node_count, Side::Right)
        }
    }
}

/// Splits each node `u` into `u_out` (left) and `u_in` (right) and each edge
/// `u -> v` into `(u_out, v_in)`. Split labels are `<label>__out` and
/// `<label>__in`. Nodes without out-edges (in-edges) keep an isolated
/// `u_out` (`u_in`).
pub fn directed_to_bipartite(g: &Graph) -> Result<(Graph, SplitNodeMap), GraphError> {
    if g.kind() != GraphKind::Directed {
        return Err(GraphError::WrongKind { expected: GraphKind::Directed, found: g.kind() });
    }
    let n = g.node_count();
    let map = SplitNodeMap::new(n);
    let labels: Vec<String> =
        g.labels().iter().map(|l| format!("{l}__out")).chain(g.labels().iter().map(|l| format!("{l}__in"))).collect();
    let partition: Vec<Side> = (0..2 * n).map(|i| if i < n { Side::Left } else { Side::Right }).collect();
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (map.out_node(u), map.in_node(v))).collect();
    let split = Graph::from_edges(GraphKind::Bipartite, labels, &edges, Some(partition))?;
    Ok((split, map))
}

/// A fitted Di-SFDP model.
#[derive(Clone, Debug)]
pub struct DiEmbedding {
    map: SplitNodeMap,
    /// Layout of the largest component of the split graph.
    layout: Layout,
    /// Split node to its row in `layout`, if it survived.
    slot: Vec<Option<usize>>,
    fallback: f64,
    report: LevelReport,
}

impl DiEmbedding {
    /// Splits `g`, keeps the largest component of the split graph and lays
    /// it out with Bi-SFDP.
    pub fn fit(g: &Graph, params: &SfdpParams) -> Result<Self, SfdpError> {
        let (split, map) = directed_to_bipartite(g)?;
        let keep = largest_component_nodes(&split);
        let lcc = induced_subgraph(&split, &keep);
        let (layout, report) = bi_sfdp_layout(&lcc, params)?;
        let mut slot = vec![None; split.node_count()];
        for (row, &s) in keep.iter().enumerate() {
            slot[s] = Some(row);
        }
        let fallback = -(1.0 + layout.max_pairwise_distance());
        Ok(DiEmbedding { map, layout, slot, fallback, report })
    }

    /// `-|x_{u_out} - x_{v_in}|`, or the fallback score when either split
    /// node fell outside the largest component.
    pub fn score(&self, u: usize, v: usize) -> f64 {
        match (self.slot[self.map.out_node(u)], self.slot[self.map.in_node(v)]) {
            (Some(a), Some(b)) => -self.layout.distance(a, b),
            _ => self.fallback,
        }
    }

    /// Score given to pairs with a missing split node: `-(1 + D)` where `D`
    /// is the largest pairwise distance in the layout.
    pub fn fallback_score(&self) -> f64 {
        self.fallback
    }

    pub fn map(&self) -> &SplitNodeMap {
        &self.map
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Position of a split node, if it is part of the layout.
    pub fn split_position(&self, split: usize) -> Option<&[f64]> {
        self.slot[split].map(|row| self.layout.position(row))
    }

    pub fn report(&self) -> &LevelReport {
        &self.report
    }

    /// Split node held by each row of the layout.
    pub fn row_nodes(&self) -> Vec<usize> {
        let mut rows = vec![0; self.layout.len()];
        for (split, row) in self.slot.iter().enumerate() {
            if let Some(r) = row {
                rows[*r] = split;
            }
        }
        rows
    }
}

/// Score of the ordered pair `(u, v)` under a fitted Di-SFDP model.
pub fn di_score(model: &DiEmbedding, u: usize, v: usize) -> f64 {
    model.score(u, v)
}

/// Orients every edge of an undirected graph from the lower-degree endpoint
/// to the higher-degree one. Equal degrees point toward the larger index.
pub fn orient_by_degree(g: &Graph) -> Result<Graph, GraphError> {
    if g.kind() != GraphKind::Undirected {
        return Err(GraphError::WrongKind { expected: GraphKind::Undirected, found: g.kind() });
    }
    let deg: Vec<usize> = (0..g.node_count()).map(|u| g.total_degree(u)).collect();
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| orient_pair(&deg, u, v)).collect();
    Graph::from_edges(GraphKind::Directed, g.labels().to_vec(), &edges, None)
}

/// Orientation of `{u, v}` under the degree rule.
pub fn orient_pair(degrees: &[usize], u: usize, v: usize) -> (usize, usize) {
    if (degrees[u], u) < (degrees[v], v) {
        (u, v)
    } else {
        (v, u)
    }
}
