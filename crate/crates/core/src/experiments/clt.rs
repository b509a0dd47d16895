use super::reports::{CltReport, EstimateReport, EstimateRow, ReportContext};
use super::stats::{ks_statistic, mean_variance};
use super::{
    check_increasing, check_rank, collect_chunked, ExperimentError, PathSource, SamplerKind,
    StatisticKind, Tag, MIN_CLT_SAMPLES,
};
use crate::coding_graph::{is_primitive, CodingGraph};
use crate::hyperbolic::{translation_length, FuchsianRep};
use crate::parry_markov::ParryChain;

#[derive(Debug, Clone, PartialEq)]
pub struct CltOptions {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub statistic: StatisticKind,
    pub sampler: SamplerKind,
    /// Redraw non-primitive closed paths (uniform sampler only).
    pub primitive_only: bool,
}

impl CltOptions {
    pub fn new(n: usize, samples: usize, seed: u64) -> Self {
        Self {
            n,
            samples,
            seed,
            statistic: StatisticKind::TranslationLength,
            sampler: SamplerKind::UniformCycle,
            primitive_only: false,
        }
    }

    pub fn statistic(mut self, kind: StatisticKind) -> Self {
        self.statistic = kind;
        self
    }

    pub fn sampler(mut self, kind: SamplerKind) -> Self {
        self.sampler = kind;
        self
    }

    pub fn primitive_only(mut self, on: bool) -> Self {
        self.primitive_only = on;
        self
    }
}

/// A CLT report together with the raw statistic values and the normalized
/// sample (x − n L̂)/(σ̂ √n), both in draw order.
#[derive(Debug, Clone)]
pub struct CltRun {
    pub report: CltReport,
    pub values: Vec<f64>,
    pub normalized: Vec<f64>,
}

pub(crate) fn draw_statistics(
    rep: &FuchsianRep,
    graph: &CodingGraph,
    chain: &ParryChain<'_>,
    opts: &CltOptions,
    tag: Tag,
) -> Result<Vec<f64>, ExperimentError> {
    if opts.n == 0 {
        return Err(ExperimentError::InvalidArgument("n must be at least 1".into()));
    }
    if opts.primitive_only && opts.sampler == SamplerKind::Markov {
        return Err(ExperimentError::InvalidArgument(
            "primitive-only filtering needs closed paths (uniform-cycle sampler)".into(),
        ));
    }
    check_rank(rep, graph)?;
    let source = PathSource::new(opts.sampler, graph, chain, opts.n)?;
    let draws = collect_chunked(opts.samples, opts.seed, tag, opts.n, |rng| {
        let mut path = source.draw(rng);
        while opts.primitive_only && !is_primitive(&path)? {
            path = source.draw(rng);
        }
        let word = path.labels();
        let g = rep.evaluate_word(&word)?;
        Ok(match opts.statistic {
            StatisticKind::Displacement => (rep.displacement_of(&g), false),
            StatisticKind::TranslationLength => {
                let clamped = !word.reduced().is_empty() && !g.is_hyperbolic();
                (translation_length(&g), clamped)
            }
        })
    })?;
    let clamps = draws.iter().filter(|(_, c)| *c).count();
    if clamps > 0 {
        return Err(ExperimentError::RepresentationInvalid(format!(
            "{clamps} of {} nontrivial words had |tr| <= 2; the representation is not a \
             discrete free Schottky or pants group",
            draws.len()
        )));
    }
    Ok(draws.into_iter().map(|(v, _)| v).collect())
}

/// Self-normalized CLT run: draws `samples` paths, evaluates the statistic,
/// and reports L̂ = mean/n, σ̂ = √(variance/n) and the KS distance of the
/// normalized sample to N(0, 1).
///
/// A sample with zero variance normalizes to all zeros (KS = 1/2).
pub fn run_clt(
    rep: &FuchsianRep,
    graph: &CodingGraph,
    chain: &ParryChain<'_>,
    opts: &CltOptions,
) -> Result<CltRun, ExperimentError> {
    if opts.samples < MIN_CLT_SAMPLES {
        return Err(ExperimentError::InvalidArgument(format!(
            "a CLT run needs at least {MIN_CLT_SAMPLES} samples, got {}",
            opts.samples
        )));
    }
    let values = draw_statistics(rep, graph, chain, opts, Tag::Clt)?;
    let (mean, variance) = mean_variance(&values);
    let sd = variance.sqrt();
    let normalized: Vec<f64> = if sd > 0.0 {
        values.iter().map(|x| (x - mean) / sd).collect()
    } else {
        vec![0.0; values.len()]
    };
    let n = opts.n as f64;
    let report = CltReport {
        report: "clt".into(),
        context: ReportContext {
            graph_hash: graph.content_hash(),
            representation_hash: Some(rep.content_hash()),
            basepoint: Some(rep.basepoint()),
            seed: Some(opts.seed),
        },
        n: opts.n,
        sample_count: values.len(),
        statistic_kind: opts.statistic,
        sampler: opts.sampler,
        primitive_only: opts.primitive_only,
        mean,
        variance,
        l_hat: mean / n,
        sigma_hat: (variance / n).sqrt(),
        ks_statistic: ks_statistic(&normalized)?,
        normalized_sample_path: None,
    };
    Ok(CltRun {
        report,
        values,
        normalized,
    })
}

/// L̂ and σ̂ at each n with the same sample budget, plus the relative change
/// between the two largest n.
pub fn estimate_l_sigma(
    rep: &FuchsianRep,
    graph: &CodingGraph,
    chain: &ParryChain<'_>,
    ns: &[usize],
    opts: &CltOptions,
) -> Result<EstimateReport, ExperimentError> {
    check_increasing(ns, "ns")?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let run = run_clt(rep, graph, chain, &CltOptions { n, ..opts.clone() })?;
        rows.push(EstimateRow {
            n,
            l_hat: run.report.l_hat,
            sigma_hat: run.report.sigma_hat,
            ks_statistic: run.report.ks_statistic,
        });
    }
    let spread = |f: fn(&EstimateRow) -> f64| {
        (rows.len() >= 2).then(|| {
            let (prev, last) = (&rows[rows.len() - 2], &rows[rows.len() - 1]);
            (f(last) - f(prev)).abs() / f(prev)
        })
    };
    let l_relative_spread = spread(|r| r.l_hat);
    let sigma_relative_spread = spread(|r| r.sigma_hat);
    Ok(EstimateReport {
        report: "estimate".into(),
        context: ReportContext {
            graph_hash: graph.content_hash(),
            representation_hash: Some(rep.content_hash()),
            basepoint: Some(rep.basepoint()),
            seed: Some(opts.seed),
        },
        statistic_kind: opts.statistic,
        sampler: opts.sampler,
        sample_count: opts.samples,
        rows,
        l_relative_spread,
        sigma_relative_spread,
        max_generator_displacement: rep.max_generator_displacement(),
    })
}
