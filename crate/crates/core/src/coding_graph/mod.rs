//! Coding graphs: labeled directed graphs whose closed paths of length n are
//! in bijection with conjugacy classes of length n, plus exact counting and
//! enumeration of those paths.

mod counting;
mod graph;
mod path;
mod words;

use thiserror::Error;

pub use counting::{
    count_primitive_cycles, cycle_to_conjugacy_class, enumerate_cycles,
    enumerate_cycles_with_budget, evaluate_path, is_primitive, path_count, trace_power,
    DEFAULT_ENUMERATION_BUDGET, MAX_COUNT_EXPONENT,
};
pub use graph::{build_free_group_graph, free_group_vertex, load_graph, CodingGraph, Edge, MAX_VERTICES};
pub use path::GraphPath;
pub use words::{ConjugacyClass, GeneratorLabel, GroupWord, Sign};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("graph file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("adjacency matrix is not aperiodic: {0}")]
    NotAperiodic(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}
