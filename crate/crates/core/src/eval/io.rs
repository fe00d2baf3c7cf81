use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{EvalError, EvalSplit};
use crate::graph::{write_edge_list, Graph, NodePair};

/// Paths written by [`write_split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitFiles {
    pub train: PathBuf,
    pub positives: PathBuf,
    pub negatives: PathBuf,
    pub manifest: PathBuf,
}

impl SplitFiles {
    pub fn in_dir(dir: &Path) -> Self {
        SplitFiles {
            train: dir.join("train.txt"),
            positives: dir.join("positives.txt"),
            negatives: dir.join("negatives.txt"),
            manifest: dir.join("manifest.txt"),
        }
    }
}

fn write_pairs(path: &Path, g: &Graph, pairs: &[NodePair]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for p in pairs {
        writeln!(out, "{} {}", g.label(p.u), g.label(p.v))?;
    }
    out.flush()
}

/// Writes the training edge list, the positive and negative pairs (as
/// labelled edge lists) and a `key=value` manifest into `dir`.
pub fn write_split(dir: &Path, g: &Graph, split: &EvalSplit) -> Result<SplitFiles, EvalError> {
    fs::create_dir_all(dir)?;
    let files = SplitFiles::in_dir(dir);
    let train = split.train_graph(g)?;
    let mut out = BufWriter::new(File::create(&files.train)?);
    write_edge_list(&train, &mut out)?;
    out.flush()?;
    write_pairs(&files.positives, g, &split.positives)?;
    write_pairs(&files.negatives, g, &split.negatives)?;
    let mut m = BufWriter::new(File::create(&files.manifest)?);
    writeln!(m, "seed={}", split.seed)?;
    writeln!(m, "fraction={}", split.fraction)?;
    writeln!(m, "regime={}", split.regime)?;
    writeln!(m, "kind={}", g.kind())?;
    writeln!(m, "nodes={}", g.node_count())?;
    writeln!(m, "train_edges={}", split.train_edges.len())?;
    writeln!(m, "positives={}", split.positives.len())?;
    writeln!(m, "negatives={}", split.negatives.len())?;
    writeln!(m, "shortfall={}", split.shortfall)?;
    m.flush()?;
    Ok(files)
}

fn read_pairs(path: &Path, g: &Graph) -> Result<Vec<(usize, usize)>, EvalError> {
    let name = path.display().to_string();
    let mut pairs = Vec::new();
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        let fail = |message: String| EvalError::SplitFormat { file: name.clone(), line: i + 1, message };
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            if line.trim().is_empty() {
                continue;
            }
            return Err(fail("expected two labels".into()));
        };
        let resolve = |l: &str| g.node_index(l).ok_or_else(|| fail(format!("unknown node label '{l}'")));
        let (u, v) = (resolve(a)?, resolve(b)?);
        if u == v {
            return Err(fail("a pair needs two distinct nodes".into()));
        }
        pairs.push((u, v));
    }
    Ok(pairs)
}

/// Reads a split written by [`write_split`] for the same graph.
pub fn read_split(dir: &Path, g: &Graph) -> Result<EvalSplit, EvalError> {
    let files = SplitFiles::in_dir(dir);
    let text = fs::read_to_string(&files.manifest)?;
    let manifest_name = files.manifest.display().to_string();
    let mut entries = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| EvalError::SplitFormat {
            file: manifest_name.clone(),
            line: i + 1,
            message: "expected key=value".into(),
        })?;
        entries.insert(k.trim().to_owned(), v.trim().to_owned());
    }
    let field = |key: &str| -> Result<&str, EvalError> {
        entries.get(key).map(String::as_str).ok_or_else(|| EvalError::SplitFormat {
            file: manifest_name.clone(),
            line: 0,
            message: format!("missing key '{key}'"),
        })
    };
    let bad = |key: &str| EvalError::SplitFormat {
        file: manifest_name.clone(),
        line: 0,
        message: format!("bad value for '{key}'"),
    };
    let seed = field("seed")?.parse().map_err(|_| bad("seed"))?;
    let fraction = field("fraction")?.parse().map_err(|_| bad("fraction"))?;
    let regime = field("regime")?.parse().map_err(|_| bad("regime"))?;
    let shortfall = field("shortfall")?.parse().map_err(|_| bad("shortfall"))?;
    if field("kind")? != g.kind().to_string() || field("nodes")? != g.node_count().to_string() {
        return Err(EvalError::SplitFormat {
            file: manifest_name,
            line: 0,
            message: "split was made for a different graph".into(),
        });
    }

    let train_edges = g.with_edges(&read_pairs(&files.train, g)?)?.edges().to_vec();
    let to_pairs =
        |raw: Vec<(usize, usize)>| raw.into_iter().map(|(u, v)| NodePair::for_kind(g.kind(), u, v)).collect();
    let positives = to_pairs(read_pairs(&files.positives, g)?);
    let negatives = to_pairs(read_pairs(&files.negatives, g)?);
    Ok(EvalSplit { train_edges, positives, negatives, seed, regime, fraction, shortfall })
}
