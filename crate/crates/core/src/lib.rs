//! Query-model graph coloring laboratory.
//!
//! Algorithms never touch a [`graph::Graph`] directly; they go through an
//! [`oracle::OracleSession`] which answers pair queries ("is edge (i,j)
//! present?") and neighbor queries ("j-th neighbor of i, or Null") while
//! counting every query exactly. Quantum search is simulated classically in
//! [`grover`] with the same accounting discipline, so the coloring algorithms
//! in [`greedy`], [`randomized`] and [`quantum`] can be benchmarked against
//! their theoretical query bounds.

pub mod graph;
pub mod greedy;
pub mod grover;
pub mod oracle;
pub mod quantum;
pub mod randomized;

pub use graph::{Coloring, Graph, ValidityReport};
pub use oracle::{OracleSession, QueryCounts};
pub use randomized::{Epsilon, EpsilonParams};
