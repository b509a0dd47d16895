//! Monte Carlo and exact experiments: the length CLT for uniform closed
//! paths, Gromov-product decay, total variation of the conjugacy-class
//! pushforward, prefix-density convergence, and the geometric diagnostics.
//!
//! Every sampling loop is split into fixed chunks of [`CHUNK_SIZE`] draws.
//! Chunk c of an experiment uses its own ChaCha stream derived from
//! (experiment tag, n, c), and chunks are concatenated in index order, so
//! results do not depend on the number of worker threads.

mod clt;
mod decay;
mod diagnostics;
mod exact;
mod reports;
mod stats;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clt::{estimate_l_sigma, run_clt, CltOptions, CltRun};
pub use decay::gromov_decay;
pub use diagnostics::{bounded_defect, holder_decay, tau_residual};
pub use exact::{rn_convergence, tv_pushforward, tv_report};
pub use reports::{
    CltReport, DecayReport, DecayRow, DefectReport, DefectRow, EstimateReport, EstimateRow,
    HolderReport, HolderRow, ReportContext, RnReport, RnRow, TauResidualReport, TauResidualRow,
    TvReport, TvRow,
};
pub use stats::{ks_statistic, least_squares_slope, mean_variance, normal_cdf};

use crate::coding_graph::{CodingGraph, GraphError, GraphPath};
use crate::hyperbolic::{FuchsianRep, HyperbolicError};
use crate::parry_markov::{MarkovError, ParryChain, SeededRng, UniformCycleSampler};

/// Draws per RNG stream.
pub const CHUNK_SIZE: usize = 1024;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Smallest sample accepted by [`run_clt`].
pub const MIN_CLT_SAMPLES: usize = 100;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("representation invalid: {0}")]
    RepresentationInvalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Markov(#[from] MarkovError),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatisticKind {
    TranslationLength,
    Displacement,
}

/// Law of the sampled paths: uniform closed paths (λₙ) or Parry-chain paths
/// (νₙ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    UniformCycle,
    Markov,
}

#[derive(Clone, Copy)]
pub(crate) enum Tag {
    Clt = 1,
    Decay = 2,
    TauResidual = 3,
    Holder = 4,
    Defect = 5,
}

/// ChaCha stream for chunk `chunk` of experiment `tag` at length `n`.
pub(crate) fn stream_id(tag: Tag, n: usize, chunk: usize) -> u64 {
    ((tag as u64) << 56) | (((n as u64) & 0x00ff_ffff) << 32) | (chunk as u64 & 0xffff_ffff)
}

/// Runs `draw` `samples` times in fixed chunks and returns the results in
/// chunk order.
pub(crate) fn collect_chunked<T, F>(
    samples: usize,
    seed: u64,
    tag: Tag,
    n: usize,
    draw: F,
) -> Result<Vec<T>, ExperimentError>
where
    T: Send,
    F: Fn(&mut SeededRng) -> Result<T, ExperimentError> + Sync,
{
    let chunks = samples.div_ceil(CHUNK_SIZE);
    let parts: Vec<Result<Vec<T>, ExperimentError>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = SeededRng::new(seed, stream_id(tag, n, c));
            let len = CHUNK_SIZE.min(samples - c * CHUNK_SIZE);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(samples);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Path source shared by the sampling experiments.
pub(crate) enum PathSource<'a, 'g> {
    Uniform(UniformCycleSampler<'g>),
    Markov(&'a ParryChain<'g>, usize),
}

impl<'a, 'g> PathSource<'a, 'g> {
    pub(crate) fn new(
        kind: SamplerKind,
        graph: &'g CodingGraph,
        chain: &'a ParryChain<'g>,
        n: usize,
    ) -> Result<Self, ExperimentError> {
        Ok(match kind {
            SamplerKind::UniformCycle => PathSource::Uniform(UniformCycleSampler::new(graph, n)?),
            SamplerKind::Markov => PathSource::Markov(chain, n),
        })
    }

    pub(crate) fn draw(&self, rng: &mut SeededRng) -> GraphPath<'g> {
        match self {
            PathSource::Uniform(s) => s.sample(rng),
            PathSource::Markov(chain, n) => chain.sample_path(*n, rng),
        }
    }
}

pub(crate) fn check_increasing(ns: &[usize], what: &str) -> Result<(), ExperimentError> {
    if ns.is_empty() {
        return Err(ExperimentError::InvalidArgument(format!("{what} is empty")));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::InvalidArgument(format!(
            "{what} must be strictly increasing, got {ns:?}"
        )));
    }
    Ok(())
}

pub(crate) fn check_rank(rep: &FuchsianRep, graph: &CodingGraph) -> Result<(), ExperimentError> {
    if graph.rank() as usize > rep.rank() {
        return Err(ExperimentError::InvalidArgument(format!(
            "graph uses generator index {} but the representation has rank {}",
            graph.rank(),
            rep.rank()
        )));
    }
    Ok(())
}

/// Runs `f` on a dedicated pool with `threads` workers, or on the global
/// pool when `threads` is `None`.
pub fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, ExperimentError> {
    match threads {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| ExperimentError::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// One value per line under a header, 17 significant digits.
pub fn column_csv(header: &str, values: &[f64]) -> String {
    let mut s = String::with_capacity(values.len() * 24 + header.len() + 1);
    s.push_str(header);
    s.push('\n');
    for v in values {
        s.push_str(&format!("{v:.16e}\n"));
    }
    s
}
