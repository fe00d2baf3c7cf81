//! Whitespace-separated edge-list files (KONECT / SNAP style).

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use super::{Graph, GraphError, GraphKind, Side};

/// Result of parsing an edge list: the graph plus counts of what was dropped.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub duplicates_dropped: usize,
    pub self_loops_dropped: usize,
}

/// Parses a line-oriented edge list.
///
/// Lines starting with `#` or `%` are comments; tokens after the first two
/// are ignored. Node labels are mapped to dense indices in order of first
/// appearance. For bipartite graphs the first column is the left side and
/// the second column the right side.
pub fn parse_edge_list<R: BufRead>(reader: R, kind: GraphKind) -> Result<ParsedGraph, GraphError> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut sides: Vec<Side> = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut edges = Vec::new();
    let mut duplicates = 0usize;
    let mut self_loops = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(GraphError::MalformedLine { line: lineno, found: 1 }),
        };

        let mut intern = |label: &str, side: Side| -> Result<usize, GraphError> {
            if let Some(&i) = index.get(label) {
                if kind == GraphKind::Bipartite && sides[i] != side {
                    return Err(GraphError::BipartiteViolation { line: lineno, label: label.to_owned() });
                }
                return Ok(i);
            }
            let i = labels.len();
            labels.push(label.to_owned());
            index.insert(label.to_owned(), i);
            sides.push(side);
            Ok(i)
        };
        let u = intern(a, Side::Left)?;
        let v = intern(b, Side::Right)?;

        if u == v {
            self_loops += 1;
            continue;
        }
        let key = match kind {
            GraphKind::Undirected => (u.min(v), u.max(v)),
            _ => (u, v),
        };
        if seen.insert(key) {
            edges.push(key);
        } else {
            duplicates += 1;
        }
    }

    if duplicates > 0 || self_loops > 0 {
        log::warn!("edge list: dropped {duplicates} duplicate edge(s) and {self_loops} self-loop(s)");
    }
    let partition = (kind == GraphKind::Bipartite).then_some(sides);
    let graph = Graph::from_edges(kind, labels, &edges, partition)?;
    Ok(ParsedGraph { graph, duplicates_dropped: duplicates, self_loops_dropped: self_loops })
}

/// Writes the canonical edge list: one `u v` line per edge with original
/// labels, sorted by canonical pair order. Bipartite edges are written
/// left side first.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for &(u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v))?;
    }
    Ok(())
}

pub fn serialize_edge_list(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("labels are valid UTF-8")
}
