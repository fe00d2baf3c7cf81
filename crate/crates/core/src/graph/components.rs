//! Connectivity utilities. Directed graphs use weak connectivity.

use super::{Graph, Side};
use crate::union_find::DisjointSet;

/// Component id for every node, numbered in order of each component's
/// smallest node index.
pub fn component_labels(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut ds = DisjointSet::new(n);
    for &(u, v) in g.edges() {
        ds.union(u, v);
    }
    let mut root_id = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|u| {
            let r = ds.find(u);
            if root_id[r] == usize::MAX {
                root_id[r] = next;
                next += 1;
            }
            root_id[r]
        })
        .collect()
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.node_count();
    if n == 0 {
        return true;
    }
    let mut ds = DisjointSet::new(n);
    for &(u, v) in g.edges() {
        ds.union(u, v);
    }
    ds.component_count() == 1
}

/// Nodes of the largest component in ascending order. Ties go to the
/// component with the smallest minimum node index.
pub fn largest_component_nodes(g: &Graph) -> Vec<usize> {
    let labels = component_labels(g);
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; count];
    for &c in &labels {
        sizes[c] += 1;
    }
    let mut best = 0;
    for (c, &s) in sizes.iter().enumerate() {
        if s > sizes[best] {
            best = c;
        }
    }
    (0..g.node_count()).filter(|&u| labels[u] == best).collect()
}

/// Subgraph induced by `nodes`, reindexed densely in ascending original order.
pub fn induced_subgraph(g: &Graph, nodes: &[usize]) -> Graph {
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut new_index = vec![usize::MAX; g.node_count()];
    for (i, &u) in sorted.iter().enumerate() {
        new_index[u] = i;
    }
    let labels = sorted.iter().map(|&u| g.label(u).to_owned()).collect();
    let edges: Vec<_> = g
        .edges()
        .iter()
        .filter(|&&(u, v)| new_index[u] != usize::MAX && new_index[v] != usize::MAX)
        .map(|&(u, v)| (new_index[u], new_index[v]))
        .collect();
    let partition: Option<Vec<Side>> = g.partition().map(|p| sorted.iter().map(|&u| p[u]).collect());
    Graph::from_edges(g.kind(), labels, &edges, partition).expect("induced subgraph of a valid graph is valid")
}

pub fn largest_connected_component(g: &Graph) -> Graph {
    induced_subgraph(g, &largest_component_nodes(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_edge_list, GraphKind};

    fn undirected(text: &str) -> Graph {
        parse_edge_list(text.as_bytes(), GraphKind::Undirected).unwrap().graph
    }

    #[test]
    fn picks_the_bigger_component() {
        let g = undirected("a b\nb c\nd e\n");
        let lcc = largest_connected_component(&g);
        assert_eq!(lcc.labels(), &["a", "b", "c"]);
        assert_eq!(lcc.edge_count(), 2);
    }

    #[test]
    fn connected_graph_is_unchanged() {
        let g = undirected("a b\nb c\nc a\n");
        assert_eq!(largest_connected_component(&g), g);
    }

    #[test]
    fn ties_go_to_the_component_of_node_zero() {
        let g = Graph::unlabeled(GraphKind::Undirected, 4, &[(2, 3), (0, 1)], None).unwrap();
        assert_eq!(largest_component_nodes(&g), vec![0, 1]);
    }

    #[test]
    fn directed_uses_weak_connectivity() {
        let g = Graph::unlabeled(GraphKind::Directed, 4, &[(0, 1), (2, 1), (3, 2)], None).unwrap();
        assert!(is_connected(&g));
    }

    #[test]
    fn isolated_node_breaks_connectivity() {
        let g = Graph::unlabeled(GraphKind::Undirected, 3, &[(0, 1)], None).unwrap();
        assert!(!is_connected(&g));
        assert_eq!(largest_connected_component(&g).node_count(), 2);
    }
}
