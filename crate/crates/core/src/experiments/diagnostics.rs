//! Geometric checks behind the CLT: the translation-length/displacement
//! relation, Hölder decay of the displacement increment DF, and the bounded
//! Gromov-product defect along a single random path.

use super::reports::{
    DefectReport, DefectRow, HolderReport, HolderRow, ReportContext, TauResidualReport,
    TauResidualRow,
};
use super::stats::least_squares_slope;
use super::{check_increasing, check_rank, collect_chunked, ExperimentError, Tag};
use crate::coding_graph::{CodingGraph, GroupWord};
use crate::hyperbolic::FuchsianRep;
use crate::parry_markov::{ParryChain, UniformCycleSampler};

fn context(rep: &FuchsianRep, graph: &CodingGraph, seed: u64) -> ReportContext {
    ReportContext {
        graph_hash: graph.content_hash(),
        representation_hash: Some(rep.content_hash()),
        basepoint: Some(rep.basepoint()),
        seed: Some(seed),
    }
}

/// For uniform closed paths of each length n, the residual
/// |τ(g) − d(z, gz) + 2(gz, g⁻¹z)_z| with g = ev(x). It stays bounded by a
/// multiple of the hyperbolicity constant, independently of n.
pub fn tau_residual(
    rep: &FuchsianRep,
    graph: &CodingGraph,
    ns: &[usize],
    samples: usize,
    seed: u64,
) -> Result<TauResidualReport, ExperimentError> {
    check_increasing(ns, "ns")?;
    check_rank(rep, graph)?;
    if samples == 0 {
        return Err(ExperimentError::InvalidArgument("samples must be positive".into()));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let sampler = UniformCycleSampler::new(graph, n)?;
        let residuals = collect_chunked(samples, seed, Tag::TauResidual, n, |rng| {
            let g = rep.evaluate_word(&sampler.sample(rng).labels())?;
            Ok(rep.tau_residual_of(&g))
        })?;
        rows.push(TauResidualRow {
            n,
            max_residual: residuals.iter().copied().fold(0.0, f64::max),
            mean_residual: residuals.iter().sum::<f64>() / samples as f64,
        });
    }
    Ok(TauResidualReport {
        report: "tau_residual".into(),
        context: context(rep, graph, seed),
        sample_count: samples,
        rows,
    })
}

/// For k = 1..=max_k: Markov paths x, y that share their first k edges and
/// continue independently for `tail_length` more steps; reports
/// max |DF(x) − DF(y)| and the least-squares slope of its logarithm in k.
pub fn holder_decay(
    rep: &FuchsianRep,
    chain: &ParryChain<'_>,
    max_k: usize,
    pairs_per_k: usize,
    tail_length: usize,
    seed: u64,
) -> Result<HolderReport, ExperimentError> {
    if max_k < 2 || pairs_per_k == 0 || tail_length == 0 {
        return Err(ExperimentError::InvalidArgument(
            "need max_k >= 2, pairs_per_k >= 1 and tail_length >= 1".into(),
        ));
    }
    check_rank(rep, chain.graph())?;
    let mut rows = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let diffs = collect_chunked(pairs_per_k, seed, Tag::Holder, k, |rng| {
            let common = chain.sample_path(k, rng);
            let x = chain.extend_path(&common, tail_length, rng);
            let y = chain.extend_path(&common, tail_length, rng);
            Ok((rep.df_increment(&x)? - rep.df_increment(&y)?).abs())
        })?;
        rows.push(HolderRow {
            k,
            max_difference: diffs.iter().copied().fold(0.0, f64::max),
        });
    }
    let ks: Vec<f64> = rows.iter().map(|r| r.k as f64).collect();
    let logs: Vec<f64> = rows
        .iter()
        .map(|r| r.max_difference.max(f64::MIN_POSITIVE).ln())
        .collect();
    Ok(HolderReport {
        report: "holder_decay".into(),
        context: context(rep, chain.graph(), seed),
        pairs_per_k,
        tail_length,
        log_slope: least_squares_slope(&ks, &logs),
        rows,
    })
}

/// For Markov paths x of length `path_length` and each n in `ns`, the
/// Gromov product (z, ev(x)z)_{ev(xⁿ)z} where xⁿ is the length-n prefix.
///
/// By invariance this equals ½(d(z, gₙz) + d(z, hz) − d(z, gz)) with
/// g = gₙh, which avoids subtracting nearby boundary points.
pub fn bounded_defect(
    rep: &FuchsianRep,
    chain: &ParryChain<'_>,
    path_length: usize,
    ns: &[usize],
    samples: usize,
    seed: u64,
) -> Result<DefectReport, ExperimentError> {
    check_increasing(ns, "ns")?;
    if ns.iter().any(|&n| n == 0 || n >= path_length) || samples == 0 {
        return Err(ExperimentError::InvalidArgument(format!(
            "each n must lie in 1..{path_length} and samples must be positive"
        )));
    }
    check_rank(rep, chain.graph())?;
    let per_sample = collect_chunked(samples, seed, Tag::Defect, path_length, |rng| {
        let word = chain.sample_path(path_length, rng).labels();
        let full = rep.displacement(&word)?;
        ns.iter()
            .map(|&n| {
                let head = GroupWord::from_letters(word.letters()[..n].to_vec());
                let tail = GroupWord::from_letters(word.letters()[n..].to_vec());
                let product = 0.5 * (rep.displacement(&head)? + rep.displacement(&tail)? - full);
                Ok(product.max(0.0))
            })
            .collect::<Result<Vec<f64>, ExperimentError>>()
    })?;
    let rows = ns
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let column = per_sample.iter().map(|v| v[i]);
            DefectRow {
                n,
                max_product: column.clone().fold(0.0, f64::max),
                mean_product: column.sum::<f64>() / samples as f64,
            }
        })
        .collect();
    Ok(DefectReport {
        report: "bounded_defect".into(),
        context: context(rep, chain.graph(), seed),
        path_length,
        sample_count: samples,
        rows,
    })
}
