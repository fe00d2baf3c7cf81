use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use super::EvalError;
use crate::baselines::{
    adamic_adar_with, common_neighbors, load_external_scores, preferential_attachment, AdamicAdarWeight, ScoreTable,
};
use crate::graph::{Graph, GraphKind, NodePair};
use crate::sfdp::{distance_score, layout_multilevel, Layout, SfdpParams};
use crate::variants::{bi_sfdp_layout, orient_by_degree, orient_pair, DiEmbedding};

/// Produces a pair scorer from a training graph.
///
/// `fit` sees only the training graph (and the trial seed), never the test
/// pairs.
pub trait Scorer: Sync {
    fn name(&self) -> String;

    fn fit(&self, train: &Graph, seed: u64) -> Result<Box<dyn PairScorer>, EvalError>;
}

/// Scores test pairs; higher means a link is more likely. `None` means the
/// scorer has no score for the pair.
pub trait PairScorer: Send + Sync {
    fn score(&self, pair: NodePair) -> Option<f64>;
}

struct LayoutScores(Layout);

impl PairScorer for LayoutScores {
    fn score(&self, pair: NodePair) -> Option<f64> {
        Some(distance_score(&self.0, pair.u, pair.v))
    }
}

/// Negated distances in a multilevel SFDP layout. Directed graphs are laid
/// out as their undirected projection, so scores are symmetric.
#[derive(Clone, Debug, Default)]
pub struct SfdpScorer {
    pub params: SfdpParams,
}

impl Scorer for SfdpScorer {
    fn name(&self) -> String {
        "sfdp".into()
    }

    fn fit(&self, train: &Graph, seed: u64) -> Result<Box<dyn PairScorer>, EvalError> {
        let (layout, _) = layout_multilevel(train, &self.params.clone().with_seed(seed))?;
        Ok(Box::new(LayoutScores(layout)))
    }
}

/// Negated distances in a Bi-SFDP layout of a bipartite graph.
#[derive(Clone, Debug, Default)]
pub struct BiSfdpScorer {
    pub params: SfdpParams,
}

impl Scorer for BiSfdpScorer {
    fn name(&self) -> String {
        "bi-sfdp".into()
    }

    fn fit(&self, train: &Graph, seed: u64) -> Result<Box<dyn PairScorer>, EvalError> {
        let (layout, _) = bi_sfdp_layout(train, &self.params.clone().with_seed(seed))?;
        Ok(Box::new(LayoutScores(layout)))
    }
}

struct DiScores(DiEmbedding);

impl PairScorer for DiScores {
    fn score(&self, pair: NodePair) -> Option<f64> {
        Some(self.0.score(pair.u, pair.v))
    }
}

/// Di-SFDP scores of ordered pairs in a directed graph.
#[derive(Clone, Debug, Default)]
pub struct DiSfdpScorer {
    pub params: SfdpParams,
}

impl Scorer for DiSfdpScorer {
    fn name(&self) -> String {
        "di-sfdp".into()
    }

    fn fit(&self, train: &Graph, seed: u64) -> Result<Box<dyn PairScorer>, EvalError> {
        if train.kind() != GraphKind::Directed {
            return Err(EvalError::UnsupportedGraph { scorer: self.name(), kind: train.kind() });
        }
        Ok(Box::new(DiScores(DiEmbedding::fit(train, &self.params.clone().with_seed(seed))?)))
    }
}

/// Di-SFDP on an undirected graph whose training edges are oriented from
/// lower to higher training degree. A test pair is scored in the same
/// orientation.
#[derive(Clone, Debug, Default)]
pub struct OrientedDiSfdpScorer {
    pub params: SfdpParams,
}

struct OrientedScores {
    model: DiEmbedding,
    degrees: Vec<usize>,
}

impl PairScorer for OrientedScores {
    fn score(&self, pair: NodePair) -> Option<f64> {
        let (u, v) = orient_pair(&self.degrees, pair.u, pair.v);
        Some(self.model.score(u, v))
    }
}

impl Scorer for OrientedDiSfdpScorer {
    fn name(&self) -> String {
        "oriented-di-sfdp".into()
    }

    fn fit(&self, train: &Graph, seed: u64) -> Result<Box<dyn PairScorer>, EvalError> {
        if train.kind() != GraphKind::Undirected {
            return Err(EvalError::UnsupportedGraph { scorer: self.name(), kind: train.kind() });
        }
        let degrees = (0..train.node_count()).map(|u| train.total_degree(u)).collect();
        let oriented = orient_by_degree(train)?;
        let model = DiEmbedding::fit(&oriented, &self.params.clone().with_seed(seed))?;
        Ok(Box::new(OrientedScores { model, degrees }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalIndex {
    CommonNeighbors,
    AdamicAdar(AdamicAdarWeight),
    PreferentialAttachment,
}

/// CN, AA or PA on the training graph (its undirected projection for
/// directed graphs).
#[derive(Clone, Copy, Debug)]
pub struct LocalIndexScorer {
    pub index: LocalIndex,
}

impl LocalIndexScorer {
    pub fn new(index: LocalIndex) -> Self {
        LocalIndexScorer { index }
    }
}

struct IndexScores {
    graph: Graph,
    index: LocalIndex,
}

impl PairScorer for IndexScores {
    fn score(&self, pair: NodePair) -> Option<f64> {
        let (g, u, v) = (&self.graph, pair.u, pair.v);
        Some(match self.index {
            LocalIndex::CommonNeighbors => common_neighbors(g, u, v) as f64,
            LocalIndex::AdamicAdar(w) => adamic_adar_with(g, u, v, w),
            LocalIndex::PreferentialAttachment => preferential_attachment(g, u, v) as f64,
        })
    }
}

impl Scorer for LocalIndexScorer {
    fn name(&self) -> String {
        match self.index {
            LocalIndex::CommonNeighbors => "cn",
            LocalIndex::AdamicAdar(AdamicAdarWeight::Inverse) => "aa",
            LocalIndex::AdamicAdar(AdamicAdarWeight::InverseLog) => "aa-log",
            LocalIndex::PreferentialAttachment => "pa",
        }
        .into()
    }

    fn fit(&self, train: &Graph, _seed: u64) -> Result<Box<dyn PairScorer>, EvalError> {
        Ok(Box::new(IndexScores { graph: train.undirected_projection(), index: self.index }))
    }
}

/// Scores read from a `label_u label_v score` file. A `{seed}` in the path
/// is replaced by the trial seed, so each trial can have its own file.
#[derive(Clone, Debug)]
pub struct ExternalScorer {
    pub path: PathBuf,
}

impl ExternalScorer {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        ExternalScorer { path: path.into() }
    }

    pub fn path_for_seed(&self, seed: u64) -> PathBuf {
        PathBuf::from(self.path.to_string_lossy().replace("{seed}", &seed.to_string()))
    }
}

struct TableScores(ScoreTable);

impl PairScorer for TableScores {
    fn score(&self, pair: NodePair) -> Option<f64> {
        self.0.get(pair)
    }
}

impl Scorer for ExternalScorer {
    fn name(&self) -> String {
        "external".into()
    }

    fn fit(&self, train: &Graph, seed: u64) -> Result<Box<dyn PairScorer>, EvalError> {
        let file = File::open(self.path_for_seed(seed))?;
        let parsed = load_external_scores(BufReader::new(file), train)?;
        Ok(Box::new(TableScores(parsed.table)))
    }
}

/// Test-only scorer that knows the full graph: `+1` on its edges, `-1`
/// elsewhere.
#[derive(Clone, Debug)]
pub struct OracleScorer {
    graph: Graph,
}

impl OracleScorer {
    pub fn new(graph: Graph) -> Self {
        OracleScorer { graph }
    }
}

struct OracleScores(Graph);

impl PairScorer for OracleScores {
    fn score(&self, pair: NodePair) -> Option<f64> {
        Some(if self.0.contains_pair(pair) { 1.0 } else { -1.0 })
    }
}

impl Scorer for OracleScorer {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn fit(&self, _train: &Graph, _seed: u64) -> Result<Box<dyn PairScorer>, EvalError> {
        Ok(Box::new(OracleScores(self.graph.clone())))
    }
}

/// Gives every pair the same score.
#[derive(Clone, Copy, Debug)]
pub struct ConstantScorer(pub f64);

struct Constant(f64);

impl PairScorer for Constant {
    fn score(&self, _pair: NodePair) -> Option<f64> {
        Some(self.0)
    }
}

impl Scorer for ConstantScorer {
    fn name(&self) -> String {
        "constant".into()
    }

    fn fit(&self, _train: &Graph, _seed: u64) -> Result<Box<dyn PairScorer>, EvalError> {
        Ok(Box::new(Constant(self.0)))
    }
}
