//! The `prepare`, `embed`, `evaluate`, `sweep` and `split` commands.

use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use spring_lp::baselines::AdamicAdarWeight;
use spring_lp::eval::{
    make_split, run_trials, write_split, BiSfdpScorer, DiSfdpScorer, ExternalScorer, LocalIndex, LocalIndexScorer,
    OracleScorer, OrientedDiSfdpScorer, Scorer, SfdpScorer, TrialStats,
};
use spring_lp::graph::{generate_icosphere_graph, largest_connected_component, parse_edge_list, write_edge_list};
use spring_lp::sfdp::{layout_multilevel, write_layout, LevelReport};
use spring_lp::variants::{bi_sfdp_layout, DiEmbedding};
use spring_lp::{Graph, GraphKind, Layout, Side};

use crate::config::{Dataset, ExperimentConfig, ScorerKind};
use crate::CliError;

/// Parses the configured dataset. Parse errors name the file and line.
pub fn load_graph(cfg: &ExperimentConfig) -> Result<Graph, CliError> {
    match cfg.dataset()? {
        Dataset::Icosphere(k) => generate_icosphere_graph(*k).map_err(|e| CliError::Validation(e.to_string())),
        Dataset::File(path) => {
            let file = File::open(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            let parsed = parse_edge_list(BufReader::new(file), cfg.kind)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            if parsed.duplicates_dropped + parsed.self_loops_dropped > 0 {
                log::info!(
                    "{}: dropped {} duplicate edge(s), {} self-loop(s)",
                    path.display(),
                    parsed.duplicates_dropped,
                    parsed.self_loops_dropped
                );
            }
            Ok(parsed.graph)
        }
    }
}

fn create_parent(path: &Path) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

/// Largest connected component written as a canonical edge list.
pub fn prepare(cfg: &ExperimentConfig, out: Option<PathBuf>) -> Result<PathBuf, CliError> {
    let dataset = cfg.dataset()?;
    if let Dataset::File(p) = dataset {
        if !p.is_file() {
            return Err(CliError::Validation(format!("dataset {} does not exist", p.display())));
        }
    }
    let g = load_graph(cfg)?;
    let lcc = largest_connected_component(&g);
    if lcc.node_count() < g.node_count() {
        log::info!("kept the largest component: {} of {} nodes", lcc.node_count(), g.node_count());
    }
    let out = out.unwrap_or_else(|| cfg.output_dir.join(format!("{}.lcc.txt", dataset.name())));
    create_parent(&out)?;
    let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = BufWriter::new(file);
    write_edge_list(&lcc, &mut w).and_then(|_| w.flush()).with_context(|| format!("writing {}", out.display()))?;
    println!("{} nodes, {} edges", lcc.node_count(), lcc.edge_count());
    Ok(out)
}

fn split_labels(g: &Graph, model: &DiEmbedding) -> Vec<String> {
    model
        .row_nodes()
        .into_iter()
        .map(|s| {
            let (u, side) = model.map().original(s);
            let suffix = if side == Side::Left { "out" } else { "in" };
            format!("{}__{suffix}", g.label(u))
        })
        .collect()
}

fn echo_level(i: usize, r: &LevelReport) {
    println!(
        "level {i}: {} nodes, {} edges, {} iterations{}, energy {:.6e} -> {:.6e}",
        r.nodes,
        r.edges,
        r.iterations,
        if r.converged { "" } else { " (not converged)" },
        r.initial_energy,
        r.final_energy
    );
}

/// Lays the graph out with the configured variant and writes the layout.
pub fn embed(cfg: &ExperimentConfig, out: Option<PathBuf>) -> Result<PathBuf, CliError> {
    cfg.validate()?;
    match cfg.scorer {
        ScorerKind::Sfdp | ScorerKind::BiSfdp | ScorerKind::DiSfdp => {}
        other => {
            return Err(CliError::Validation(format!(
                "embed needs a layout scorer (sfdp, bi-sfdp or di-sfdp), got {other}"
            )))
        }
    }
    if cfg.scorer == ScorerKind::Sfdp && cfg.kind == GraphKind::Directed {
        return Err(CliError::Validation(
            "sfdp ignores edge directions; use --scorer di-sfdp for directed graphs".into(),
        ));
    }
    let g = load_graph(cfg)?;
    let params = cfg.sfdp_params();
    let (layout, labels, levels): (Layout, Vec<String>, Vec<LevelReport>) = match cfg.scorer {
        ScorerKind::Sfdp => {
            let (layout, report) = layout_multilevel(&g, &params).context("sfdp layout")?;
            (layout, g.labels().to_vec(), report.levels)
        }
        ScorerKind::BiSfdp => {
            let (layout, report) = bi_sfdp_layout(&g, &params).context("bi-sfdp layout")?;
            (layout, g.labels().to_vec(), vec![report])
        }
        _ => {
            let model = DiEmbedding::fit(&g, &params).context("di-sfdp layout")?;
            let labels = split_labels(&g, &model);
            (model.layout().clone(), labels, vec![model.report().clone()])
        }
    };
    for (i, r) in levels.iter().enumerate() {
        echo_level(i, r);
    }
    let total: usize = levels.iter().map(|r| r.iterations).sum();
    let energy = levels.last().map_or(0.0, |r| r.final_energy);
    println!("final energy {energy:.6e}, {total} iterations over {} level(s)", levels.len());

    let out = out.unwrap_or_else(|| {
        cfg.output_dir.join(format!(
            "{}.{}.d{}.layout",
            cfg.dataset().map(|d| d.name()).unwrap_or_default(),
            cfg.scorer,
            cfg.sfdp.dim
        ))
    });
    create_parent(&out)?;
    let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = BufWriter::new(file);
    write_layout(&layout, &labels, params.seed, &mut w).with_context(|| format!("writing {}", out.display()))?;
    w.flush().with_context(|| format!("writing {}", out.display()))?;
    println!("wrote {}", out.display());
    Ok(out)
}

fn build_scorer(cfg: &ExperimentConfig, g: &Graph) -> Box<dyn Scorer> {
    let params = cfg.sfdp.clone();
    match cfg.scorer {
        ScorerKind::Sfdp => Box::new(SfdpScorer { params }),
        ScorerKind::BiSfdp => Box::new(BiSfdpScorer { params }),
        ScorerKind::DiSfdp => Box::new(DiSfdpScorer { params }),
        ScorerKind::OrientedDiSfdp => Box::new(OrientedDiSfdpScorer { params }),
        ScorerKind::CommonNeighbors => Box::new(LocalIndexScorer::new(LocalIndex::CommonNeighbors)),
        ScorerKind::AdamicAdar => Box::new(LocalIndexScorer::new(LocalIndex::AdamicAdar(AdamicAdarWeight::Inverse))),
        ScorerKind::AdamicAdarLog => {
            Box::new(LocalIndexScorer::new(LocalIndex::AdamicAdar(AdamicAdarWeight::InverseLog)))
        }
        ScorerKind::PreferentialAttachment => Box::new(LocalIndexScorer::new(LocalIndex::PreferentialAttachment)),
        ScorerKind::External => Box::new(ExternalScorer::new(cfg.scores.clone().unwrap_or_default())),
        ScorerKind::Oracle => Box::new(OracleScorer::new(g.clone())),
    }
}

fn run(cfg: &ExperimentConfig, g: &Graph) -> anyhow::Result<TrialStats> {
    if cfg.scorer == ScorerKind::Sfdp && cfg.kind == GraphKind::Directed {
        log::warn!("sfdp scores directed pairs symmetrically; di-sfdp uses edge directions");
    }
    let scorer = build_scorer(cfg, g);
    run_trials(g, scorer.as_ref(), &cfg.trial_config())
        .with_context(|| format!("{} on {}", cfg.scorer, cfg.dataset.as_ref().map(|d| d.name()).unwrap_or_default()))
}

const RESULT_HEADER: [&str; 11] =
    ["dataset", "scorer", "params_digest", "dim", "fraction", "regime", "trials", "mean_auc", "std", "ci95", "seed"];

/// Runs the trials and appends one row to the results CSV.
pub fn evaluate(cfg: &ExperimentConfig, csv_path: Option<PathBuf>) -> Result<PathBuf, CliError> {
    cfg.validate()?;
    let g = load_graph(cfg)?;
    let stats = run(cfg, &g)?;
    let path = csv_path.unwrap_or_else(|| cfg.output_dir.join("results.csv"));
    create_parent(&path)?;
    let fresh = fs::metadata(&path).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if fresh {
        w.write_record(RESULT_HEADER).context("writing CSV header")?;
    }
    w.write_record([
        cfg.dataset()?.name(),
        cfg.scorer.to_string(),
        cfg.params_digest(),
        cfg.sfdp.dim.to_string(),
        cfg.fraction.to_string(),
        cfg.regime.to_string(),
        cfg.trials.to_string(),
        stats.mean.to_string(),
        stats.std.to_string(),
        stats.ci95_halfwidth.to_string(),
        cfg.seed.to_string(),
    ])
    .context("writing CSV row")?;
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    println!(
        "{} {} on {}: mean AUC {:.4} (std {:.4}, 95% CI +-{:.4}, {} trials)",
        cfg.scorer,
        cfg.params_digest(),
        cfg.dataset()?.name(),
        stats.mean,
        stats.std,
        stats.ci95_halfwidth,
        cfg.trials
    );
    Ok(path)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    Dim,
    P,
}

impl Axis {
    fn key(self) -> &'static str {
        match self {
            Axis::Dim => "dim",
            Axis::P => "p",
        }
    }
}

/// One evaluation per axis value, written as long-form CSV. Failed values
/// are recorded and the sweep continues; the result is an error if any failed.
pub fn sweep(cfg: &ExperimentConfig, axis: Axis, values: &[String], out: Option<PathBuf>) -> Result<PathBuf, CliError> {
    if values.is_empty() {
        return Err(CliError::Validation("sweep needs at least one value (--values 2,3,5)".into()));
    }
    let mut configs = Vec::with_capacity(values.len());
    for v in values {
        let mut c = cfg.clone();
        c.set(axis.key(), v.trim()).map_err(CliError::Validation)?;
        c.validate()?;
        configs.push(c);
    }
    let g = load_graph(cfg)?;
    let path = out.unwrap_or_else(|| cfg.output_dir.join(format!("sweep-{}.csv", axis.key())));
    create_parent(&path)?;
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["dataset", "scorer", "params_digest", "axis", "axis_value", "mean", "std", "ci95", "error"])
        .context("writing CSV header")?;
    let mut failed = 0;
    for (v, c) in values.iter().zip(&configs) {
        let (mean, std, ci, error) = match run(c, &g) {
            Ok(s) => {
                println!("{}={}: mean AUC {:.4} (std {:.4})", axis.key(), v.trim(), s.mean, s.std);
                (s.mean.to_string(), s.std.to_string(), s.ci95_halfwidth.to_string(), String::new())
            }
            Err(e) => {
                failed += 1;
                log::error!("{}={}: {e:#}", axis.key(), v.trim());
                (String::new(), String::new(), String::new(), format!("{e:#}"))
            }
        };
        w.write_record([
            c.dataset()?.name(),
            c.scorer.to_string(),
            c.params_digest(),
            axis.key().to_string(),
            v.trim().to_string(),
            mean,
            std,
            ci,
            error,
        ])
        .context("writing CSV row")?;
        w.flush().with_context(|| format!("writing {}", path.display()))?;
    }
    if failed > 0 {
        return Err(CliError::Runtime(anyhow::anyhow!(
            "{failed} of {} sweep value(s) failed; see {}",
            values.len(),
            path.display()
        )));
    }
    Ok(path)
}

/// Exports the split of every trial to `<dir>/split-<seed>/`.
pub fn split(cfg: &ExperimentConfig, dir: Option<PathBuf>) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let g = load_graph(cfg)?;
    let dir = dir.unwrap_or_else(|| {
        cfg.output_dir.join(format!("{}-splits", cfg.dataset().map(|d| d.name()).unwrap_or_default()))
    });
    let trial = cfg.trial_config();
    let mut written = Vec::with_capacity(cfg.trials);
    for i in 0..cfg.trials as u64 {
        let seed = cfg.seed + i;
        let split = make_split(&g, &trial, seed).with_context(|| format!("split for seed {seed}"))?;
        let sub = dir.join(format!("split-{seed}"));
        write_split(&sub, &g, &split).with_context(|| format!("writing {}", sub.display()))?;
        println!(
            "seed {seed}: {} train edges, {} positives, {} negatives -> {}",
            split.train_edges.len(),
            split.positives.len(),
            split.negatives.len(),
            sub.display()
        );
        written.push(sub);
    }
    Ok(written)
}
