use super::reports::{DecayReport, DecayRow, ReportContext};
use super::{check_increasing, check_rank, collect_chunked, ExperimentError, Tag};
use crate::coding_graph::CodingGraph;
use crate::hyperbolic::FuchsianRep;
use crate::parry_markov::UniformCycleSampler;

/// For each n, the fraction of uniform closed paths whose self Gromov
/// product (ev(x)z, ev(x)⁻¹z)_z exceeds ε√n, for every ε in `epsilons`.
/// One sample per n is shared by all ε, so rows are antitone in ε.
pub fn gromov_decay(
    rep: &FuchsianRep,
    graph: &CodingGraph,
    epsilons: &[f64],
    ns: &[usize],
    samples: usize,
    seed: u64,
) -> Result<DecayReport, ExperimentError> {
    check_increasing(ns, "ns")?;
    if epsilons.is_empty() || epsilons.iter().any(|e| e.is_nan() || *e <= 0.0 || !e.is_finite()) {
        return Err(ExperimentError::InvalidArgument(format!(
            "epsilons must be positive and finite, got {epsilons:?}"
        )));
    }
    if samples == 0 {
        return Err(ExperimentError::InvalidArgument("samples must be positive".into()));
    }
    check_rank(rep, graph)?;
    let mut rows = Vec::with_capacity(ns.len() * epsilons.len());
    for &n in ns {
        let sampler = UniformCycleSampler::new(graph, n)?;
        let products = collect_chunked(samples, seed, Tag::Decay, n, |rng| {
            Ok(rep.self_gromov(&sampler.sample(rng).labels())?)
        })?;
        for &epsilon in epsilons {
            let threshold = epsilon * (n as f64).sqrt();
            let exceed = products.iter().filter(|&&p| p > threshold).count();
            rows.push(DecayRow {
                epsilon,
                n,
                sample_count: samples,
                exceed_fraction: exceed as f64 / samples as f64,
            });
        }
    }
    rows.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon).then(a.n.cmp(&b.n)));
    Ok(DecayReport {
        report: "gromov_decay".into(),
        context: ReportContext {
            graph_hash: graph.content_hash(),
            representation_hash: Some(rep.content_hash()),
            basepoint: Some(rep.basepoint()),
            seed: Some(seed),
        },
        epsilons: epsilons.to_vec(),
        rows,
    })
}
