use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::coarsen::contract;
use super::noise::{splitmix64, unit_direction};
use super::{optimize, Layout, LevelReport, SfdpError, SfdpParams};
use crate::graph::{is_connected, Graph, GraphKind};

/// Coarsening also stops when a level keeps more than this share of nodes.
const STALL_RATIO: f64 = 0.75;
/// Prolonged positions are offset by this multiple of `K`.
const PROLONGATION_JITTER: f64 = 0.01;
const PROLONGATION_SALT: u64 = 0x0070_726f_6c6f_6e67;

/// Per-level diagnostics, coarsest level first.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilevelReport {
    pub levels: Vec<LevelReport>,
}

struct Level {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<u32>,
    /// Mapping into the next coarser level, if any.
    mapping: Option<Vec<usize>>,
}

/// Lays out a connected graph with the multilevel scheme.
///
/// The graph is coarsened by repeated random matchings until it has at most
/// `coarsen_threshold` nodes. The coarsest level starts from uniform random
/// positions in a box of side `K sqrt(n)`; every finer level starts from its
/// coarse parent's position plus a small seeded offset. Edge multiplicities
/// from coarsening weight the springs. Directed graphs use their undirected
/// projection. The result depends only on the graph and `params`.
pub fn layout_multilevel(g: &Graph, params: &SfdpParams) -> Result<(Layout, MultilevelReport), SfdpError> {
    params.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Ok((Layout::zeros(0, params.dim), MultilevelReport { levels: Vec::new() }));
    }
    if !is_connected(g) {
        return Err(SfdpError::Disconnected);
    }
    let projected;
    let base = if g.kind() == GraphKind::Directed {
        projected = g.undirected_projection();
        &projected
    } else {
        g
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut levels =
        vec![Level { node_count: n, edges: base.edges().to_vec(), weights: vec![1; base.edge_count()], mapping: None }];
    loop {
        let fine = levels.last().unwrap();
        if fine.node_count <= params.coarsen_threshold || fine.node_count < 2 {
            break;
        }
        let c = contract(fine.node_count, &fine.edges, &fine.weights, &mut rng);
        if c.node_count as f64 > STALL_RATIO * fine.node_count as f64 {
            log::debug!("multilevel: coarsening stalled at {} nodes", fine.node_count);
            break;
        }
        levels.last_mut().unwrap().mapping = Some(c.mapping);
        levels.push(Level { node_count: c.node_count, edges: c.edges, weights: c.weights, mapping: None });
    }

    let k = params.natural_length;
    let coarsest = levels.last().unwrap();
    let side = k * (coarsest.node_count as f64).sqrt();
    let mut layout = Layout::random_uniform(coarsest.node_count, params.dim, side, &mut rng);
    let mut reports = Vec::with_capacity(levels.len());
    let jitter_seed = splitmix64(params.seed ^ PROLONGATION_SALT);

    for depth in (0..levels.len()).rev() {
        let level = &levels[depth];
        if let Some(mapping) = &level.mapping {
            layout = prolong(&layout, mapping, depth as u64, jitter_seed, PROLONGATION_JITTER * k);
        }
        let weights: Vec<f64> = level.weights.iter().map(|&w| w as f64).collect();
        let (next, report) = optimize(&level.edges, &weights, layout, params, None)?;
        log::debug!(
            "multilevel: level {depth} ({} nodes) took {} iterations, converged={}",
            report.nodes,
            report.iterations,
            report.converged
        );
        layout = next;
        reports.push(report);
    }
    Ok((layout, MultilevelReport { levels: reports }))
}

fn prolong(coarse: &Layout, mapping: &[usize], level: u64, seed: u64, radius: f64) -> Layout {
    let dim = coarse.dim();
    let mut fine = Layout::zeros(mapping.len(), dim);
    let mut dir = vec![0.0; dim];
    for (u, &c) in mapping.iter().enumerate() {
        unit_direction(seed, level, u as u64, &mut dir);
        for ((x, &base), d) in fine.position_mut(u).iter_mut().zip(coarse.position(c)).zip(&dir) {
            *x = base + radius * d;
        }
    }
    fine
}
