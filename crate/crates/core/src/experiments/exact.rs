use std::collections::HashMap;

use super::reports::{ReportContext, RnReport, RnRow, TvReport, TvRow};
use super::{check_increasing, ExperimentError};
use crate::coding_graph::{
    cycle_to_conjugacy_class, enumerate_cycles_with_budget, CodingGraph, DEFAULT_ENUMERATION_BUDGET,
};
use crate::parry_markov::{rn_sup_deviation, ParryChain};

/// Exact total variation between the pushforward of the uniform law on
/// closed paths of length n and the uniform law on the conjugacy classes it
/// reaches. Enumerates every closed path; refuses beyond `budget` paths.
pub fn tv_pushforward(graph: &CodingGraph, n: usize, budget: u64) -> Result<TvRow, ExperimentError> {
    let cycles = enumerate_cycles_with_budget(graph, n, budget)?;
    let mut fibers: HashMap<_, u64> = HashMap::new();
    for cycle in &cycles {
        *fibers.entry(cycle_to_conjugacy_class(cycle)?).or_default() += 1;
    }
    let total = cycles.len() as u128;
    let classes = fibers.len() as u128;
    // ½ Σ |c/T − 1/K| = ½ Σ |cK − T| / (TK), with an exact integer numerator.
    let numerator: u128 = fibers
        .values()
        .map(|&c| (c as u128 * classes).abs_diff(total))
        .sum();
    let tv = numerator as f64 / (2.0 * total as f64 * classes as f64);
    Ok(TvRow {
        n,
        cycles: total as u64,
        classes: classes as u64,
        tv_distance: tv.clamp(0.0, 1.0),
    })
}

pub fn tv_report(graph: &CodingGraph, ns: &[usize]) -> Result<TvReport, ExperimentError> {
    check_increasing(ns, "ns")?;
    let rows = ns
        .iter()
        .map(|&n| tv_pushforward(graph, n, DEFAULT_ENUMERATION_BUDGET))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TvReport {
        report: "tv".into(),
        context: ReportContext {
            graph_hash: graph.content_hash(),
            representation_hash: None,
            basepoint: None,
            seed: None,
        },
        rows,
    })
}

/// sup |dλ_{n,m}/dν_{n,m} − 1| for each (n, m), evaluated exactly from
/// integer matrix powers.
pub fn rn_convergence(
    graph: &CodingGraph,
    chain: &ParryChain<'_>,
    pairs: &[(usize, usize)],
) -> Result<RnReport, ExperimentError> {
    let rows = pairs
        .iter()
        .map(|&(n, m)| {
            Ok(RnRow {
                n,
                m,
                sup_deviation: rn_sup_deviation(graph, chain, n, m)?,
            })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    Ok(RnReport {
        report: "rn".into(),
        context: ReportContext {
            graph_hash: graph.content_hash(),
            representation_hash: None,
            basepoint: None,
            seed: None,
        },
        rows,
    })
}
