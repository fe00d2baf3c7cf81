use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{auc, split_edges, EvalError, EvalSplit, NegativeSampler, Regime, Scorer, TiePolicy};
use crate::graph::{Graph, NodePair};

/// Whose degrees weight the degree-proportional negative half.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DegreeSource {
    #[default]
    Original,
    Train,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub fraction: f64,
    pub trials: usize,
    pub regime: Regime,
    pub tie_policy: TiePolicy,
    /// Trial `i` uses seed `base_seed + i`.
    pub base_seed: u64,
    pub degree_source: DegreeSource,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            fraction: 0.1,
            trials: 10,
            regime: Regime::Uniform,
            tie_policy: TiePolicy::Strict,
            base_seed: 0,
            degree_source: DegreeSource::Original,
        }
    }
}

/// AUC values of repeated trials with their summary statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialStats {
    pub auc_values: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (zero for a single trial).
    pub std: f64,
    /// `1.96 * std / sqrt(trials)`.
    pub ci95_halfwidth: f64,
}

impl TrialStats {
    pub fn from_values(auc_values: Vec<f64>) -> Self {
        let n = auc_values.len() as f64;
        let mean = auc_values.iter().sum::<f64>() / n;
        let std = if auc_values.len() > 1 {
            (auc_values.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        TrialStats { auc_values, mean, std, ci95_halfwidth: 1.96 * std / n.sqrt() }
    }
}

/// Hides edges and samples an equal number of negatives, all from `seed`.
pub fn make_split(g: &Graph, config: &TrialConfig, seed: u64) -> Result<EvalSplit, EvalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = split_edges(g, config.fraction, &mut rng)?;
    split.seed = seed;
    split.regime = config.regime;
    let mut sampler = NegativeSampler::new(g, config.regime)?;
    if config.degree_source == DegreeSource::Train {
        let train = split.train_graph(g)?;
        sampler = sampler.with_degrees((0..g.node_count()).map(|u| train.total_degree(u)).collect());
    }
    split.negatives = sampler.sample(split.positives.len(), &mut rng)?;
    Ok(split)
}

/// Fits `scorer` on the split's training graph and returns the AUC of the
/// positives against the negatives.
pub fn evaluate_split(
    g: &Graph,
    split: &EvalSplit,
    scorer: &dyn Scorer,
    tie_policy: TiePolicy,
) -> Result<f64, EvalError> {
    let train = split.train_graph(g)?;
    let model = scorer.fit(&train, split.seed)?;
    let mut missing = Vec::new();
    let mut collect = |pairs: &[NodePair]| -> Vec<f64> {
        pairs
            .iter()
            .filter_map(|&p| {
                let s = model.score(p);
                if s.is_none() {
                    missing.push(p);
                }
                s
            })
            .collect()
    };
    let pos = collect(&split.positives);
    let neg = collect(&split.negatives);
    if !missing.is_empty() {
        let examples = missing.iter().take(10).map(|p| format!("{} {}", g.label(p.u), g.label(p.v))).collect();
        return Err(EvalError::MissingScores { count: missing.len(), examples });
    }
    auc(&pos, &neg, tie_policy)
}

/// Runs `config.trials` independent trials in parallel. Results do not
/// depend on the number of threads.
pub fn run_trials(g: &Graph, scorer: &dyn Scorer, config: &TrialConfig) -> Result<TrialStats, EvalError> {
    if config.trials == 0 {
        return Err(EvalError::NoTrials);
    }
    let values = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = config.base_seed.wrapping_add(i);
            let split = make_split(g, config, seed)?;
            let value = evaluate_split(g, &split, scorer, config.tie_policy)?;
            log::info!("{}: trial {i} (seed {seed}) AUC {value:.4}", scorer.name());
            Ok(value)
        })
        .collect::<Result<Vec<f64>, EvalError>>()?;
    Ok(TrialStats::from_values(values))
}
