//! Spring-electrical graph embeddings for structural link prediction.
//!
//! The crate lays graphs out with an SFDP-style spring-electrical model
//! (Barnes-Hut repulsion, multilevel coarsening, adaptive cooling) and uses
//! negated Euclidean distances between node positions as link scores. It
//! also carries the bipartite and directed variants of the model, local
//! similarity baselines and a seeded AUC evaluation harness.

pub mod baselines;
pub mod eval;
pub mod graph;
pub mod sfdp;
pub mod union_find;
pub mod variants;

pub use graph::{Direction, Graph, GraphError, GraphKind, NodePair, Side};
pub use sfdp::{Layout, SfdpError, SfdpParams};
