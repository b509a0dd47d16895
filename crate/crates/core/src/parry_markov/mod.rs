//! Perron–Frobenius data, the Parry Markov chain, exactly uniform closed-path
//! sampling, and the prefix density between the two path laws.

mod chain;
mod perron;
mod rn;
mod rng;
mod uniform;

use thiserror::Error;

pub use chain::ParryChain;
pub use perron::{perron_frobenius, PerronData, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};
pub use rn::{log_cut, rn_derivative, rn_derivative_exact, rn_sup_deviation};
pub use rng::SeededRng;
pub use uniform::{random_below, UniformCycleSampler, MAX_SAMPLER_LENGTH};

use crate::coding_graph::{CodingGraph, GraphError, GraphPath};

#[derive(Debug, Error)]
pub enum MarkovError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("power iteration did not converge in {iterations} steps (last change {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Builds the Parry chain of a coding graph.
pub fn build_parry_chain(graph: &CodingGraph) -> Result<ParryChain<'_>, MarkovError> {
    ParryChain::new(graph)
}

/// One draw from νₙ.
pub fn sample_path<'g, R: rand::Rng + ?Sized>(
    chain: &ParryChain<'g>,
    n: usize,
    rng: &mut R,
) -> GraphPath<'g> {
    chain.sample_path(n, rng)
}

/// One draw from λₙ. Builds the count table on every call; reuse a
/// [`UniformCycleSampler`] when drawing many paths of the same length.
pub fn sample_uniform_cycle<'g, R: rand::Rng + ?Sized>(
    graph: &'g CodingGraph,
    n: usize,
    rng: &mut R,
) -> Result<GraphPath<'g>, MarkovError> {
    Ok(UniformCycleSampler::new(graph, n)?.sample(rng))
}

/// First `k` edges of a path.
pub fn prefix<'g>(path: &GraphPath<'g>, k: usize) -> Result<GraphPath<'g>, MarkovError> {
    Ok(path.prefix(k)?)
}

/// The shift T: drops the first edge.
pub fn shift<'g>(path: &GraphPath<'g>) -> Result<GraphPath<'g>, MarkovError> {
    Ok(path.shift()?)
}
