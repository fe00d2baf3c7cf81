//! Local similarity indices and imported score tables.
//!
//! Neighbourhoods of directed graphs are taken in the undirected projection
//! (successors and predecessors together).

use std::borrow::Cow;
use std::collections::HashMap;
use std::io::BufRead;

use crate::graph::{Graph, GraphKind, NodePair};

fn neighborhood(g: &Graph, u: usize) -> Cow<'_, [usize]> {
    if g.kind() != GraphKind::Directed {
        return Cow::Borrowed(g.neighbors(u));
    }
    let (a, b) = (g.successors(u), g.predecessors(u));
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (_, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        merged.push(next);
    }
    Cow::Owned(merged)
}

/// Calls `f` for every common neighbour of `u` and `v`.
fn for_common(g: &Graph, u: usize, v: usize, mut f: impl FnMut(usize)) {
    let (a, b) = (neighborhood(g, u), neighborhood(g, v));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Undirected degree (size of the neighbourhood).
pub fn neighborhood_size(g: &Graph, u: usize) -> usize {
    neighborhood(g, u).len()
}

/// `|N(u) ∩ N(v)|`.
pub fn common_neighbors(g: &Graph, u: usize, v: usize) -> usize {
    let mut count = 0;
    for_common(g, u, v, |_| count += 1);
    count
}

/// Weighting of common neighbours in the Adamic-Adar index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AdamicAdarWeight {
    /// `1 / |N(z)|`.
    #[default]
    Inverse,
    /// `1 / ln |N(z)|`, the customary form.
    InverseLog,
}

/// Sum over common neighbours `z` of `1 / |N(z)|`.
pub fn adamic_adar(g: &Graph, u: usize, v: usize) -> f64 {
    adamic_adar_with(g, u, v, AdamicAdarWeight::Inverse)
}

pub fn adamic_adar_with(g: &Graph, u: usize, v: usize, weight: AdamicAdarWeight) -> f64 {
    let mut sum = 0.0;
    for_common(g, u, v, |z| {
        // A common neighbour touches both u and v, so its degree is at least 2.
        let d = neighborhood_size(g, z) as f64;
        sum += match weight {
            AdamicAdarWeight::Inverse => 1.0 / d,
            AdamicAdarWeight::InverseLog => 1.0 / d.ln(),
        };
    });
    sum
}

/// `|N(u)| * |N(v)|`.
pub fn preferential_attachment(g: &Graph, u: usize, v: usize) -> usize {
    neighborhood_size(g, u) * neighborhood_size(g, v)
}

#[derive(Debug, thiserror::Error)]
pub enum ScoreFileError {
    #[error("score file line {line}: expected 'label_u label_v score'")]
    Malformed { line: usize },
    #[error("score file line {line}: unknown node label '{label}'")]
    UnknownLabel { line: usize, label: String },
    #[error("score file line {line}: score '{token}' is not a finite number")]
    BadScore { line: usize, token: String },
    #[error("score file line {line}: a pair needs two distinct nodes")]
    SelfPair { line: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Finite scores per node pair; higher means a link is more likely.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScoreTable {
    entries: HashMap<NodePair, f64>,
}

impl ScoreTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a score, returning the previous one. Panics on non-finite
    /// scores.
    pub fn insert(&mut self, pair: NodePair, score: f64) -> Option<f64> {
        assert!(score.is_finite(), "scores must be finite");
        self.entries.insert(pair, score)
    }

    pub fn get(&self, pair: NodePair) -> Option<f64> {
        self.entries.get(&pair).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodePair, f64)> + '_ {
        self.entries.iter().map(|(&p, &s)| (p, s))
    }
}

/// An imported score table with the number of duplicate lines overridden.
#[derive(Clone, Debug)]
pub struct ParsedScores {
    pub table: ScoreTable,
    pub duplicates_replaced: usize,
}

/// Reads `label_u label_v score` lines. Pairs are keyed in `g`'s
/// orientation (ordered only for directed graphs); a repeated pair keeps the
/// last score. Blank lines and `#` / `%` comments are skipped.
pub fn load_external_scores<R: BufRead>(reader: R, g: &Graph) -> Result<ParsedScores, ScoreFileError> {
    let mut table = ScoreTable::new();
    let mut duplicates = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let [a, b, s] = tokens[..] else {
            return Err(ScoreFileError::Malformed { line: lineno });
        };
        let resolve = |label: &str| {
            g.node_index(label).ok_or_else(|| ScoreFileError::UnknownLabel { line: lineno, label: label.to_owned() })
        };
        let (u, v) = (resolve(a)?, resolve(b)?);
        if u == v {
            return Err(ScoreFileError::SelfPair { line: lineno });
        }
        let score: f64 = s
            .parse()
            .ok()
            .filter(|x: &f64| x.is_finite())
            .ok_or_else(|| ScoreFileError::BadScore { line: lineno, token: s.to_owned() })?;
        if table.insert(NodePair::for_kind(g.kind(), u, v), score).is_some() {
            log::warn!("score file line {lineno}: duplicate pair {a} {b}, keeping the later score");
            duplicates += 1;
        }
    }
    Ok(ParsedScores { table, duplicates_replaced: duplicates })
}
