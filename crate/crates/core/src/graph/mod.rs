//! Immutable graph representation shared by every other module.
//!
//! Nodes are dense indices `0..node_count` with an attached bijection to the
//! external string labels found in the input files. Edges are deduplicated
//! and kept in canonical order: `u < v` for undirected graphs, `(source,
//! target)` for directed graphs and `(left, right)` for bipartite graphs.

mod components;
mod icosphere;
mod io;

use std::collections::HashMap;
use std::fmt;

pub use components::{
    component_labels, induced_subgraph, is_connected, largest_component_nodes, largest_connected_component,
};
pub use icosphere::{generate_icosphere_graph, icosphere_mesh, Mesh, MAX_ICOSPHERE_SUBDIVISIONS};
pub use io::{parse_edge_list, serialize_edge_list, write_edge_list, ParsedGraph};

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: expected at least two tokens, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("line {line}: label `{label}` appears on both sides of a bipartite graph")]
    BipartiteViolation { line: usize, label: String },
    #[error("edge ({u}, {v}) does not cross the bipartite partition")]
    NonCrossingEdge { u: usize, v: usize },
    #[error("node index {index} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { index: usize, node_count: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),
    #[error("bipartite graph requires a partition covering every node")]
    MissingPartition,
    #[error("{direction:?} degree is only defined for directed graphs")]
    DirectionMismatch { direction: Direction },
    #[error("icosphere subdivisions must be at most {max}, got {got}")]
    SubdivisionsOutOfRange { got: u32, max: u32 },
    #[error("operation requires a {expected} graph, got {found}")]
    WrongKind { expected: GraphKind, found: GraphKind },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Undirected,
    Directed,
    Bipartite,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Undirected => "undirected",
            GraphKind::Directed => "directed",
            GraphKind::Bipartite => "bipartite",
        })
    }
}

impl std::str::FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "undirected" => Ok(GraphKind::Undirected),
            "directed" => Ok(GraphKind::Directed),
            "bipartite" => Ok(GraphKind::Bipartite),
            other => Err(format!("unknown graph kind `{other}`")),
        }
    }
}

/// Side of a bipartite partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    All,
    In,
    Out,
}

/// A pair of distinct nodes. Unordered pairs are stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePair {
    pub u: usize,
    pub v: usize,
    pub ordered: bool,
}

impl NodePair {
    /// Unordered pair in canonical order. Panics if `u == v`.
    pub fn unordered(u: usize, v: usize) -> Self {
        assert_ne!(u, v, "a node pair needs two distinct nodes");
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        NodePair { u, v, ordered: false }
    }

    /// Ordered pair `u -> v`. Panics if `u == v`.
    pub fn ordered(u: usize, v: usize) -> Self {
        assert_ne!(u, v, "a node pair needs two distinct nodes");
        NodePair { u, v, ordered: true }
    }

    /// Pair in the orientation used by graphs of `kind`.
    pub fn for_kind(kind: GraphKind, u: usize, v: usize) -> Self {
        match kind {
            GraphKind::Directed => NodePair::ordered(u, v),
            _ => NodePair::unordered(u, v),
        }
    }

    pub fn reversed(self) -> Self {
        NodePair { u: self.v, v: self.u, ordered: self.ordered }
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    kind: GraphKind,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    partition: Option<Vec<Side>>,
    out_offsets: Vec<usize>,
    out_adj: Vec<usize>,
    in_offsets: Vec<usize>,
    in_adj: Vec<usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.labels == other.labels
            && self.edges == other.edges
            && self.partition == other.partition
    }
}

impl Graph {
    /// Builds a graph from dense node indices.
    ///
    /// Duplicate edges are merged silently. Self-loops, out-of-range indices
    /// and (for bipartite graphs) edges inside one side are errors. Bipartite
    /// edges may be given in either orientation.
    pub fn from_edges(
        kind: GraphKind,
        labels: Vec<String>,
        edges: &[(usize, usize)],
        partition: Option<Vec<Side>>,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(GraphError::DuplicateLabel(label.clone()));
            }
        }
        let partition = match kind {
            GraphKind::Bipartite => match partition {
                Some(p) if p.len() == n => Some(p),
                _ => return Err(GraphError::MissingPartition),
            },
            _ => None,
        };

        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::NodeOutOfRange { index: x, node_count: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = match kind {
                GraphKind::Undirected => (u.min(v), u.max(v)),
                GraphKind::Directed => (u, v),
                GraphKind::Bipartite => {
                    let sides = partition.as_ref().expect("checked above");
                    match (sides[u], sides[v]) {
                        (Side::Left, Side::Right) => (u, v),
                        (Side::Right, Side::Left) => (v, u),
                        _ => return Err(GraphError::NonCrossingEdge { u, v }),
                    }
                }
            };
            canon.push(e);
        }
        canon.sort_unstable();
        canon.dedup();

        let (out_offsets, out_adj, in_offsets, in_adj) = build_adjacency(kind, n, &canon);
        Ok(Graph { kind, labels, index, edges: canon, partition, out_offsets, out_adj, in_offsets, in_adj })
    }

    /// Graph whose labels are the decimal node indices.
    pub fn unlabeled(
        kind: GraphKind,
        node_count: usize,
        edges: &[(usize, usize)],
        partition: Option<Vec<Side>>,
    ) -> Result<Self, GraphError> {
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Graph::from_edges(kind, labels, edges, partition)
    }

    /// Same nodes, labels and partition with a different edge set.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Graph::from_edges(self.kind, self.labels.clone(), edges, self.partition.clone())
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical, sorted edge list.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn partition(&self) -> Option<&[Side]> {
        self.partition.as_deref()
    }

    pub fn side(&self, u: usize) -> Option<Side> {
        self.partition.as_ref().map(|p| p[u])
    }

    /// Neighbours of `u`: every adjacent node for undirected and bipartite
    /// graphs, successors for directed graphs. Sorted ascending.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[self.out_offsets[u]..self.out_offsets[u + 1]]
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        self.neighbors(u)
    }

    /// Predecessors of `u` in a directed graph; neighbours otherwise.
    pub fn predecessors(&self, u: usize) -> &[usize] {
        match self.kind {
            GraphKind::Directed => &self.in_adj[self.in_offsets[u]..self.in_offsets[u + 1]],
            _ => self.neighbors(u),
        }
    }

    pub fn degree(&self, u: usize, direction: Direction) -> Result<usize, GraphError> {
        if u >= self.node_count() {
            return Err(GraphError::NodeOutOfRange { index: u, node_count: self.node_count() });
        }
        let out = self.out_offsets[u + 1] - self.out_offsets[u];
        match (self.kind, direction) {
            (GraphKind::Directed, Direction::Out) => Ok(out),
            (GraphKind::Directed, Direction::In) => Ok(self.in_offsets[u + 1] - self.in_offsets[u]),
            (GraphKind::Directed, Direction::All) => Ok(out + self.in_offsets[u + 1] - self.in_offsets[u]),
            (_, Direction::All) => Ok(out),
            (_, direction) => Err(GraphError::DirectionMismatch { direction }),
        }
    }

    /// Total degree (in + out for directed graphs). Panics on a bad index.
    pub fn total_degree(&self, u: usize) -> usize {
        self.degree(u, Direction::All).expect("node index in range")
    }

    /// Whether the edge exists, respecting direction for directed graphs.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.node_count() || v >= self.node_count() {
            return false;
        }
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn contains_pair(&self, pair: NodePair) -> bool {
        self.has_edge(pair.u, pair.v)
    }

    /// Undirected view of a directed graph (reciprocal edges merge).
    /// Undirected graphs are returned unchanged; bipartite graphs keep their
    /// partition.
    pub fn undirected_projection(&self) -> Graph {
        match self.kind {
            GraphKind::Directed => Graph::from_edges(GraphKind::Undirected, self.labels.clone(), &self.edges, None)
                .expect("a valid directed graph projects to a valid undirected graph"),
            _ => self.clone(),
        }
    }

    /// Edges as node pairs in this graph's orientation.
    pub fn edge_pairs(&self) -> impl Iterator<Item = NodePair> + '_ {
        self.edges.iter().map(move |&(u, v)| NodePair::for_kind(self.kind, u, v))
    }
}

fn build_adjacency(
    kind: GraphKind,
    n: usize,
    edges: &[(usize, usize)],
) -> (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>) {
    let directed = kind == GraphKind::Directed;
    let mut out_deg = vec![0usize; n];
    let mut in_deg = vec![0usize; n];
    for &(u, v) in edges {
        out_deg[u] += 1;
        if directed {
            in_deg[v] += 1;
        } else {
            out_deg[v] += 1;
        }
    }
    let offsets = |deg: &[usize]| {
        let mut off = Vec::with_capacity(n + 1);
        off.push(0);
        for d in deg {
            off.push(off.last().unwrap() + d);
        }
        off
    };
    let out_offsets = offsets(&out_deg);
    let in_offsets = if directed { offsets(&in_deg) } else { vec![0; n + 1] };
    let mut out_adj = vec![0usize; *out_offsets.last().unwrap()];
    let mut in_adj = vec![0usize; *in_offsets.last().unwrap()];
    let mut out_fill = out_offsets.clone();
    let mut in_fill = in_offsets.clone();
    for &(u, v) in edges {
        out_adj[out_fill[u]] = v;
        out_fill[u] += 1;
        if directed {
            in_adj[in_fill[v]] = u;
            in_fill[v] += 1;
        } else {
            out_adj[out_fill[v]] = u;
            out_fill[v] += 1;
        }
    }
    for u in 0..n {
        out_adj[out_offsets[u]..out_offsets[u + 1]].sort_unstable();
        if directed {
            in_adj[in_offsets[u]..in_offsets[u + 1]].sort_unstable();
        }
    }
    (out_offsets, out_adj, in_offsets, in_adj)
}
