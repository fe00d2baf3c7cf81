//! Structural link-prediction protocol.
//!
//! A trial hides a share of the edges while keeping the graph connected,
//! samples as many non-edges as were hidden, fits a scorer on the remaining
//! edges only and reports the AUC of the hidden edges against the sampled
//! non-edges.

mod auc;
mod io;
mod negatives;
mod scorer;
mod split;
mod trials;

use std::fmt;
use std::str::FromStr;

pub use auc::{auc, auc_brute_force, TiePolicy};
pub use io::{read_split, write_split, SplitFiles};
pub use negatives::{difficult_pairs, sample_negatives, NegativeSampler, MAX_ATTEMPTS_PER_SAMPLE};
pub use scorer::{
    BiSfdpScorer, ConstantScorer, DiSfdpScorer, ExternalScorer, LocalIndex, LocalIndexScorer, OracleScorer,
    OrientedDiSfdpScorer, PairScorer, Scorer, SfdpScorer,
};
pub use split::{hide_target, split_edges, EvalSplit};
pub use trials::{evaluate_split, make_split, run_trials, DegreeSource, TrialConfig, TrialStats};

use crate::baselines::ScoreFileError;
use crate::graph::{GraphError, GraphKind};
use crate::sfdp::SfdpError;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("graph is not connected; take its largest connected component first")]
    Disconnected,
    #[error("hidden fraction must lie in (0, 1), got {0}")]
    InvalidFraction(f64),
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("need {needed} non-edges but the graph only has {available}")]
    InsufficientNonEdges { needed: usize, available: usize },
    #[error("negative sampling gave up after {attempts} attempts ({found} of {needed} found)")]
    SamplingExhausted { attempts: usize, found: usize, needed: usize },
    #[error("regime {regime} needs a {expected} graph, got {found}")]
    RegimeMismatch { regime: Regime, expected: GraphKind, found: GraphKind },
    #[error("AUC needs at least one positive and one negative score")]
    EmptyScores,
    #[error("score is not finite")]
    NonFiniteScore,
    #[error("{scorer} does not support {kind} graphs")]
    UnsupportedGraph { scorer: String, kind: GraphKind },
    #[error("score file has no score for {count} test pair(s), e.g. {}", examples.join(", "))]
    MissingScores { count: usize, examples: Vec<String> },
    #[error("split file {file} line {line}: {message}")]
    SplitFormat { file: String, line: usize, message: String },
    #[error(transparent)]
    Sfdp(#[from] SfdpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    ScoreFile(#[from] ScoreFileError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How negative (non-edge) test pairs are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Uniform over the graph's pair universe.
    #[default]
    Uniform,
    /// Half uniform, half with endpoints drawn proportionally to degree.
    BipartiteWeighted,
    /// Half uniform, half reversed edges that are not edges themselves.
    DirectedDifficult,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Uniform => "uniform",
            Regime::BipartiteWeighted => "bipartite_weighted",
            Regime::DirectedDifficult => "directed_difficult",
        })
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Regime::Uniform),
            "bipartite_weighted" => Ok(Regime::BipartiteWeighted),
            "directed_difficult" => Ok(Regime::DirectedDifficult),
            other => {
                Err(format!("unknown regime '{other}' (expected uniform, bipartite_weighted or directed_difficult)"))
            }
        }
    }
}
