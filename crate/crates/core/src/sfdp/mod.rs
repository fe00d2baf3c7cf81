//! Spring-electrical layout engine.
//!
//! Forces follow the spring-electrical model with a tunable repulsive
//! exponent: every pair of nodes repels with magnitude `C K^(1+p) / d^p` and
//! every edge attracts with magnitude `d^2 / K`. Layouts are found by an
//! adaptive-step force iteration on a multilevel hierarchy, with Barnes-Hut
//! approximation of the repulsion in up to three dimensions.

mod coarsen;
mod energy;
mod force;
mod io;
mod layout;
mod multilevel;
pub(crate) mod noise;
mod optimizer;
mod repulsion;
mod tree;

pub use coarsen::{coarsen, CoarseningLevel};
pub use energy::{net_force_field, system_energy, system_energy_masked};
pub use force::{attractive_force, repulsive_force};
pub use io::{read_layout, write_layout, LayoutFile};
pub use layout::Layout;
pub use multilevel::{layout_multilevel, MultilevelReport};
pub use optimizer::{layout_single_level, LevelReport};
pub use repulsion::{repulsion_field, RepulsionField};
pub use tree::{build_spatial_tree, Cell, SpatialTree, MAX_TREE_DEPTH, MAX_TREE_DIM};

pub(crate) use force::ForceLaw;
pub(crate) use optimizer::optimize;

use crate::graph::GraphError;

#[derive(Debug, thiserror::Error)]
pub enum SfdpError {
    #[error("nodes {u} and {v} occupy the same position")]
    Coincident { u: usize, v: usize },
    #[error("coincident points have no defined force direction")]
    Singular,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("non-finite force or position at iteration {iteration} (level with {nodes} nodes)")]
    NonFinite { iteration: usize, nodes: usize },
    #[error("graph is not connected; take its largest connected component first")]
    Disconnected,
    #[error("layout has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("layout has {found} positions but the graph has {expected} nodes")]
    SizeMismatch { expected: usize, found: usize },
    #[error("spatial tree supports at most {MAX_TREE_DIM} dimensions, got {0}")]
    UnsupportedDimension(usize),
    #[error("non-finite coordinate for node {0}")]
    NonFiniteCoordinate(usize),
    #[error("layout file line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Model and optimizer constants.
#[derive(Clone, Debug, PartialEq)]
pub struct SfdpParams {
    /// Repulsion strength `C`.
    pub repulsion_strength: f64,
    /// Natural spring length `K`.
    pub natural_length: f64,
    /// Repulsive exponent `p`.
    pub repulsion_exponent: f64,
    /// Embedding dimensionality.
    pub dim: usize,
    /// Barnes-Hut opening threshold on `width / distance`.
    pub theta: f64,
    /// Initial step length; `None` means `K`.
    pub step_init: Option<f64>,
    /// Step multiplier applied on energy increase, in (0, 1).
    pub cooling: f64,
    /// Convergence threshold on the largest displacement, relative to `K`.
    pub tol: f64,
    /// Iteration cap per level.
    pub max_iters: usize,
    /// Coarsening stops once a level has at most this many nodes.
    pub coarsen_threshold: usize,
    pub seed: u64,
}

impl Default for SfdpParams {
    fn default() -> Self {
        SfdpParams {
            repulsion_strength: 0.2,
            natural_length: 1.0,
            repulsion_exponent: 2.0,
            dim: 2,
            theta: 1.2,
            step_init: None,
            cooling: 0.9,
            tol: 0.01,
            max_iters: 500,
            coarsen_threshold: 50,
            seed: 0,
        }
    }
}

impl SfdpParams {
    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_exponent(mut self, p: f64) -> Self {
        self.repulsion_exponent = p;
        self
    }

    pub fn step_init(&self) -> f64 {
        self.step_init.unwrap_or(self.natural_length)
    }

    pub fn validate(&self) -> Result<(), SfdpError> {
        let positive = [
            ("C", self.repulsion_strength),
            ("K", self.natural_length),
            ("p", self.repulsion_exponent),
            ("tol", self.tol),
            ("step_init", self.step_init()),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(SfdpError::InvalidParam(format!("{name} must be positive and finite, got {value}")));
            }
        }
        if !(self.theta.is_finite() && self.theta >= 0.0) {
            return Err(SfdpError::InvalidParam(format!("theta must be non-negative, got {}", self.theta)));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(SfdpError::InvalidParam(format!("cooling must lie in (0, 1), got {}", self.cooling)));
        }
        if self.dim == 0 {
            return Err(SfdpError::InvalidParam("dim must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(SfdpError::InvalidParam("max_iters must be at least 1".into()));
        }
        if self.coarsen_threshold == 0 {
            return Err(SfdpError::InvalidParam("coarsen_threshold must be at least 1".into()));
        }
        Ok(())
    }
}

/// Restricts repulsion to pairs of nodes in different classes.
///
/// Bipartite layouts use the two sides of the partition as classes, so only
/// left-right pairs repel.
#[derive(Clone, Debug, PartialEq)]
pub struct RepulsionMask {
    class: Vec<u8>,
}

impl RepulsionMask {
    pub fn by_class(class: Vec<u8>) -> Self {
        RepulsionMask { class }
    }

    pub fn repels(&self, u: usize, v: usize) -> bool {
        u != v && self.class[u] != self.class[v]
    }

    pub fn class_of(&self, u: usize) -> u8 {
        self.class[u]
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub(crate) fn classes(&self) -> Vec<u8> {
        let mut c = self.class.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    pub(crate) fn members(&self, class: u8) -> Vec<usize> {
        (0..self.class.len()).filter(|&u| self.class[u] == class).collect()
    }
}

/// Link score of a pair: the negated Euclidean distance, so that closer
/// pairs score higher.
pub fn distance_score(layout: &Layout, u: usize, v: usize) -> f64 {
    -layout.distance(u, v)
}
