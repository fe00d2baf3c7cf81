//! Experiment configuration.
//!
//! A configuration is a plain-text file of `key = value` lines. Values are
//! resolved in order: built-in defaults, the file, the output-directory
//! environment variable, then command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};
use spring_lp::eval::{DegreeSource, ExternalScorer, Regime, TiePolicy, TrialConfig};
use spring_lp::graph::MAX_ICOSPHERE_SUBDIVISIONS as MAX_ICOSPHERE;
use spring_lp::{GraphKind, SfdpParams};

use crate::CliError;

pub const OUTPUT_DIR_ENV: &str = "SPRING_LP_OUTPUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScorerKind {
    Sfdp,
    BiSfdp,
    DiSfdp,
    OrientedDiSfdp,
    CommonNeighbors,
    AdamicAdar,
    AdamicAdarLog,
    PreferentialAttachment,
    External,
    /// Scores hidden edges +1 and everything else -1; a pipeline sanity check.
    Oracle,
}

const SCORERS: [(ScorerKind, &str); 10] = [
    (ScorerKind::Sfdp, "sfdp"),
    (ScorerKind::BiSfdp, "bi-sfdp"),
    (ScorerKind::DiSfdp, "di-sfdp"),
    (ScorerKind::OrientedDiSfdp, "oriented-di-sfdp"),
    (ScorerKind::CommonNeighbors, "cn"),
    (ScorerKind::AdamicAdar, "aa"),
    (ScorerKind::AdamicAdarLog, "aa-log"),
    (ScorerKind::PreferentialAttachment, "pa"),
    (ScorerKind::External, "external"),
    (ScorerKind::Oracle, "oracle"),
];

impl ScorerKind {
    pub fn name(self) -> &'static str {
        SCORERS.iter().find(|(k, _)| *k == self).map(|(_, n)| *n).unwrap()
    }
}

impl fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScorerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SCORERS.iter().find(|(_, n)| *n == s).map(|(k, _)| *k).ok_or_else(|| {
            let names: Vec<&str> = SCORERS.iter().map(|(_, n)| *n).collect();
            format!("unknown scorer '{s}' (expected one of {})", names.join(", "))
        })
    }
}

/// Input graph: an edge-list file or a generated icosphere (`icosphere:<k>`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dataset {
    File(PathBuf),
    Icosphere(u32),
}

impl Dataset {
    /// Short name used in file names and reports.
    pub fn name(&self) -> String {
        match self {
            Dataset::File(p) => p.file_stem().map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned()),
            Dataset::Icosphere(k) => format!("icosphere-{k}"),
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dataset::File(p) => write!(f, "{}", p.display()),
            Dataset::Icosphere(k) => write!(f, "icosphere:{k}"),
        }
    }
}

impl FromStr for Dataset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix("icosphere:") {
            Some(k) => k.parse().map(Dataset::Icosphere).map_err(|_| format!("bad icosphere level '{k}'")),
            None if s.is_empty() => Err("dataset path is empty".into()),
            None => Ok(Dataset::File(PathBuf::from(s))),
        }
    }
}

fn parse_degree_source(s: &str) -> Result<DegreeSource, String> {
    match s {
        "original" => Ok(DegreeSource::Original),
        "train" => Ok(DegreeSource::Train),
        other => Err(format!("unknown degree source '{other}' (expected original or train)")),
    }
}

fn degree_source_name(d: DegreeSource) -> &'static str {
    match d {
        DegreeSource::Original => "original",
        DegreeSource::Train => "train",
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: Option<Dataset>,
    pub kind: GraphKind,
    pub scorer: ScorerKind,
    /// Score file for the external scorer; `{seed}` is replaced per trial.
    pub scores: Option<PathBuf>,
    pub sfdp: SfdpParams,
    pub fraction: f64,
    pub trials: usize,
    pub regime: Regime,
    pub tie_policy: TiePolicy,
    pub degree_source: DegreeSource,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let trial = TrialConfig::default();
        ExperimentConfig {
            dataset: None,
            kind: GraphKind::Undirected,
            scorer: ScorerKind::Sfdp,
            scores: None,
            sfdp: SfdpParams::default(),
            fraction: trial.fraction,
            trials: trial.trials,
            regime: trial.regime,
            tie_policy: trial.tie_policy,
            degree_source: trial.degree_source,
            output_dir: PathBuf::from("results"),
            seed: trial.base_seed,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("invalid value '{value}' for {key}"))
}

impl ExperimentConfig {
    /// Defaults, then `file`, then `output_dir_env`, then `overrides` in order.
    pub fn resolve(
        file: Option<&Path>,
        output_dir_env: Option<String>,
        overrides: &[(String, String)],
    ) -> Result<Self, CliError> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = file {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            cfg.apply_text(&text)
                .map_err(|(line, msg)| CliError::Validation(format!("{}:{line}: {msg}", path.display())))?;
        }
        if let Some(dir) = output_dir_env.filter(|d| !d.is_empty()) {
            cfg.output_dir = PathBuf::from(dir);
        }
        for (key, value) in overrides {
            cfg.set(key, value).map_err(CliError::Validation)?;
        }
        Ok(cfg)
    }

    /// Applies `key = value` lines; `#` starts a comment. Errors carry the line number.
    pub fn apply_text(&mut self, text: &str) -> Result<(), (usize, String)> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or((i + 1, format!("expected key = value, got '{line}'")))?;
            self.set(key.trim(), value.trim()).map_err(|m| (i + 1, m))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "dataset" => self.dataset = Some(value.parse()?),
            "kind" => self.kind = value.parse()?,
            "scorer" => self.scorer = value.parse()?,
            "scores" => self.scores = Some(PathBuf::from(value)),
            "fraction" => self.fraction = parse(key, value)?,
            "trials" => self.trials = parse(key, value)?,
            "regime" => self.regime = value.parse()?,
            "tie_policy" => self.tie_policy = value.parse()?,
            "degree_source" => self.degree_source = parse_degree_source(value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "seed" => self.seed = parse(key, value)?,
            "dim" => self.sfdp.dim = parse(key, value)?,
            "p" => self.sfdp.repulsion_exponent = parse(key, value)?,
            "C" => self.sfdp.repulsion_strength = parse(key, value)?,
            "K" => self.sfdp.natural_length = parse(key, value)?,
            "theta" => self.sfdp.theta = parse(key, value)?,
            "step_init" => self.sfdp.step_init = Some(parse(key, value)?),
            "cooling" => self.sfdp.cooling = parse(key, value)?,
            "tol" => self.sfdp.tol = parse(key, value)?,
            "max_iters" => self.sfdp.max_iters = parse(key, value)?,
            "coarsen_threshold" => self.sfdp.coarsen_threshold = parse(key, value)?,
            other => return Err(format!("unknown configuration key '{other}'")),
        }
        Ok(())
    }

    pub fn dataset(&self) -> Result<&Dataset, CliError> {
        self.dataset.as_ref().ok_or_else(|| CliError::Validation("no dataset given (set dataset = <path>)".into()))
    }

    pub fn trial_config(&self) -> TrialConfig {
        TrialConfig {
            fraction: self.fraction,
            trials: self.trials,
            regime: self.regime,
            tie_policy: self.tie_policy,
            base_seed: self.seed,
            degree_source: self.degree_source,
        }
    }

    /// Engine parameters with the configured seed.
    pub fn sfdp_params(&self) -> SfdpParams {
        self.sfdp.clone().with_seed(self.seed)
    }

    /// Checks everything that can be checked without loading the graph.
    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |m: String| Err(CliError::Validation(m));
        match self.dataset()? {
            Dataset::File(p) if !p.is_file() => return invalid(format!("dataset {} does not exist", p.display())),
            Dataset::Icosphere(k) if *k > MAX_ICOSPHERE => {
                return invalid(format!("icosphere level must be at most {MAX_ICOSPHERE}, got {k}"))
            }
            Dataset::Icosphere(_) if self.kind != GraphKind::Undirected => {
                return invalid("icosphere datasets are undirected; set kind = undirected".into())
            }
            _ => {}
        }
        if !(self.fraction > 0.0 && self.fraction < 1.0) {
            return invalid(format!("fraction must lie in (0, 1), got {}", self.fraction));
        }
        if self.trials == 0 {
            return invalid("trials must be at least 1".into());
        }
        self.sfdp.validate().map_err(|e| CliError::Validation(e.to_string()))?;

        let required = match self.scorer {
            ScorerKind::BiSfdp => Some(GraphKind::Bipartite),
            ScorerKind::DiSfdp => Some(GraphKind::Directed),
            ScorerKind::OrientedDiSfdp => Some(GraphKind::Undirected),
            _ => None,
        };
        if let Some(kind) = required.filter(|k| *k != self.kind) {
            return invalid(format!("scorer {} needs a {kind} graph, but kind = {}", self.scorer, self.kind));
        }
        let regime_kind = match self.regime {
            Regime::Uniform => None,
            Regime::BipartiteWeighted => Some(GraphKind::Bipartite),
            Regime::DirectedDifficult => Some(GraphKind::Directed),
        };
        if let Some(kind) = regime_kind.filter(|k| *k != self.kind) {
            return invalid(format!("regime {} needs a {kind} graph, but kind = {}", self.regime, self.kind));
        }
        if self.scorer == ScorerKind::External {
            let Some(scores) = &self.scores else {
                return invalid("scorer external needs scores = <path>".into());
            };
            let external = ExternalScorer::new(scores);
            for i in 0..self.trials as u64 {
                let path = external.path_for_seed(self.seed + i);
                if !path.is_file() {
                    return invalid(format!("score file {} does not exist", path.display()));
                }
            }
        }
        Ok(())
    }

    /// Resolved settings as sorted `key=value` lines, excluding the output
    /// directory. Equal settings give equal text.
    pub fn canonical(&self) -> String {
        let s = &self.sfdp;
        let mut entries = vec![
            ("dataset", self.dataset.as_ref().map_or(String::new(), |d| d.to_string())),
            ("kind", self.kind.to_string()),
            ("scorer", self.scorer.to_string()),
            ("scores", self.scores.as_ref().map_or(String::new(), |p| p.display().to_string())),
            ("fraction", self.fraction.to_string()),
            ("trials", self.trials.to_string()),
            ("regime", self.regime.to_string()),
            ("tie_policy", self.tie_policy.to_string()),
            ("degree_source", degree_source_name(self.degree_source).into()),
            ("seed", self.seed.to_string()),
            ("dim", s.dim.to_string()),
            ("p", s.repulsion_exponent.to_string()),
            ("C", s.repulsion_strength.to_string()),
            ("K", s.natural_length.to_string()),
            ("theta", s.theta.to_string()),
            ("step_init", s.step_init().to_string()),
            ("cooling", s.cooling.to_string()),
            ("tol", s.tol.to_string()),
            ("max_iters", s.max_iters.to_string()),
            ("coarsen_threshold", s.coarsen_threshold.to_string()),
        ];
        entries.sort_by(|a, b| a.0.cmp(b.0));
        entries.into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// First 16 hex digits of the SHA-256 of [`canonical`](Self::canonical).
    pub fn params_digest(&self) -> String {
        let hash = Sha256::digest(self.canonical().as_bytes());
        hex::encode(&hash[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_overrides() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("# comment\nscorer = cn\ndim=3   # trailing\n\nfraction = 0.3\n").unwrap();
        assert_eq!(cfg.scorer, ScorerKind::CommonNeighbors);
        assert_eq!(cfg.sfdp.dim, 3);
        cfg.set("dim", "5").unwrap();
        assert_eq!(cfg.sfdp.dim, 5);
        assert_eq!(cfg.fraction, 0.3);
    }

    #[test]
    fn bad_lines_report_line_numbers() {
        let mut cfg = ExperimentConfig::default();
        assert_eq!(cfg.apply_text("dim = 2\nnonsense\n").unwrap_err().0, 2);
        assert!(cfg.apply_text("colour = red").unwrap_err().1.contains("unknown configuration key"));
        assert!(cfg.apply_text("trials = many").unwrap_err().1.contains("trials"));
    }

    #[test]
    fn digest_tracks_settings_but_not_output_dir() {
        let a = ExperimentConfig { dataset: Some(Dataset::Icosphere(2)), ..Default::default() };
        let b = ExperimentConfig { output_dir: PathBuf::from("elsewhere"), ..a.clone() };
        assert_eq!(a.params_digest(), b.params_digest());
        assert_eq!(a.params_digest().len(), 16);
        let mut c = a.clone();
        c.set("p", "3").unwrap();
        assert_ne!(a.params_digest(), c.params_digest());
    }

    #[test]
    fn validation_rules() {
        let base = ExperimentConfig { dataset: Some(Dataset::Icosphere(1)), ..Default::default() };
        base.validate().unwrap();
        let bad = |cfg: ExperimentConfig| matches!(cfg.validate(), Err(CliError::Validation(_)));
        assert!(bad(ExperimentConfig { fraction: 1.0, ..base.clone() }));
        assert!(bad(ExperimentConfig { trials: 0, ..base.clone() }));
        assert!(bad(ExperimentConfig { scorer: ScorerKind::DiSfdp, ..base.clone() }));
        assert!(bad(ExperimentConfig { regime: Regime::DirectedDifficult, ..base.clone() }));
        assert!(bad(ExperimentConfig { scorer: ScorerKind::External, ..base.clone() }));
        assert!(bad(ExperimentConfig { dataset: Some(Dataset::File("no/such/file".into())), ..base.clone() }));
        assert!(bad(ExperimentConfig { dataset: None, ..base }));
    }

    #[test]
    fn scorer_and_dataset_names_round_trip() {
        for (kind, name) in SCORERS {
            assert_eq!(name.parse::<ScorerKind>().unwrap(), kind);
            assert_eq!(kind.to_string(), name);
        }
        assert_eq!("icosphere:3".parse::<Dataset>().unwrap(), Dataset::Icosphere(3));
        assert_eq!("data/euroroad.txt".parse::<Dataset>().unwrap().name(), "euroroad");
    }
}
