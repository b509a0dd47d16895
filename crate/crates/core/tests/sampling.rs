use std::collections::HashMap;

use geodesic_clt::coding_graph::{build_free_group_graph, enumerate_cycles, load_graph, CodingGraph, GraphPath};
use geodesic_clt::parry_markov::{ParryChain, SeededRng, UniformCycleSampler};
use num_traits::ToPrimitive;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const FIBONACCI: &str = "vertices 2\nedge 0 0 1 +\nedge 0 1 2 +\nedge 1 0 3 +\n";

/// Upper-tail p-value of Pearson's statistic for observed counts against
/// expected probabilities.
fn chi_square_p(observed: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    ChiSquared::new((observed.len() - 1) as f64).unwrap().sf(stat)
}

/// All paths of length k from the chain's support, by brute-force extension.
fn all_paths(graph: &CodingGraph, k: usize) -> Vec<GraphPath<'_>> {
    let mut paths: Vec<GraphPath<'_>> = (0..graph.vertex_count())
        .map(|v| GraphPath::new(graph, v, vec![]).unwrap())
        .collect();
    for _ in 0..k {
        paths = paths
            .iter()
            .flat_map(|p| {
                graph.out_edges(p.end()).iter().map(move |&e| {
                    let mut edges = p.edges().to_vec();
                    edges.push(e);
                    GraphPath::new(graph, p.start(), edges).unwrap()
                })
            })
            .collect();
    }
    paths
}

#[test]
fn uniform_sampler_matches_enumeration() {
    let g = build_free_group_graph(2).unwrap();
    let cycles = enumerate_cycles(&g, 6).unwrap();
    let index: HashMap<(usize, Vec<usize>), usize> = cycles
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.start(), c.edges().to_vec()), i))
        .collect();
    let sampler = UniformCycleSampler::new(&g, 6).unwrap();
    assert_eq!(sampler.total().to_usize().unwrap(), cycles.len());
    let mut rng = SeededRng::new(101, 0);
    let mut counts = vec![0u64; cycles.len()];
    for _ in 0..100_000 {
        let c = sampler.sample(&mut rng);
        counts[index[&(c.start(), c.edges().to_vec())]] += 1;
    }
    let p = chi_square_p(&counts, &vec![1.0 / cycles.len() as f64; cycles.len()]);
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn unranking_is_a_bijection_onto_enumeration_order() {
    let g = load_graph(FIBONACCI).unwrap();
    let cycles = enumerate_cycles(&g, 7).unwrap();
    let sampler = UniformCycleSampler::new(&g, 7).unwrap();
    for (rank, c) in cycles.iter().enumerate() {
        let decoded = sampler.unrank(&rank.into()).unwrap();
        assert_eq!((decoded.start(), decoded.edges()), (c.start(), c.edges()));
    }
    assert!(sampler.unrank(&cycles.len().into()).is_err());
}

#[test]
fn length_zero_paths_follow_pi() {
    let g = load_graph(FIBONACCI).unwrap();
    let chain = ParryChain::new(&g).unwrap();
    let mut rng = SeededRng::new(5, 0);
    let mut counts = [0u64; 2];
    for _ in 0..50_000 {
        let p = chain.sample_path(0, &mut rng);
        assert!(p.is_empty());
        counts[p.start()] += 1;
    }
    let p = chi_square_p(&counts, chain.pi());
    assert!(p > 0.01, "p = {p}");
    // π for the golden-mean shift: (φ², 1)/(φ² + 1)
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((chain.pi()[0] - phi * phi / (phi * phi + 1.0)).abs() < 1e-12);
}

fn cylinder_test(graph: &CodingGraph, sample_len: usize, k: usize, seed: u64) -> f64 {
    let chain = ParryChain::new(graph).unwrap();
    let paths = all_paths(graph, k);
    let index: HashMap<(usize, Vec<usize>), usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.start(), p.edges().to_vec()), i))
        .collect();
    let probs: Vec<f64> = paths.iter().map(|p| chain.cylinder_probability(p)).collect();
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let mut rng = SeededRng::new(seed, 0);
    let mut counts = vec![0u64; paths.len()];
    for _ in 0..60_000 {
        let p = chain.sample_path(sample_len, &mut rng).prefix(k).unwrap();
        counts[index[&(p.start(), p.edges().to_vec())]] += 1;
    }
    chi_square_p(&counts, &probs)
}

#[test]
fn cylinder_frequencies_length_three() {
    let fib = load_graph(FIBONACCI).unwrap();
    let f2 = build_free_group_graph(2).unwrap();
    assert!(cylinder_test(&fib, 3, 3, 11) > 0.01);
    assert!(cylinder_test(&f2, 3, 3, 12) > 0.01);
}

#[test]
fn prefixes_of_longer_paths_have_the_shorter_law() {
    // νₙ pushed through the prefix map is νₙ₋ₘ.
    let fib = load_graph(FIBONACCI).unwrap();
    assert!(cylinder_test(&fib, 9, 4, 13) > 0.01);
}

#[test]
fn sampling_is_seed_deterministic() {
    let g = build_free_group_graph(3).unwrap();
    let chain = ParryChain::new(&g).unwrap();
    let sampler = UniformCycleSampler::new(&g, 40).unwrap();
    let draw = |seed| {
        let mut rng = SeededRng::new(seed, 3);
        (0..20)
            .map(|_| (sampler.sample(&mut rng).edges().to_vec(), chain.sample_path(15, &mut rng).edges().to_vec()))
            .collect::<Vec<_>>()
    };
    assert_eq!(draw(1), draw(1));
    assert_ne!(draw(1), draw(2));
}

#[test]
fn sampled_cycles_are_closed_and_reduced() {
    let g = build_free_group_graph(2).unwrap();
    let sampler = UniformCycleSampler::new(&g, 100).unwrap();
    let mut rng = SeededRng::new(0, 0);
    for _ in 0..200 {
        let c = sampler.sample(&mut rng);
        assert!(c.is_closed());
        assert_eq!(c.len(), 100);
        assert!(c.labels().is_cyclically_reduced());
    }
}

#[test]
fn sampler_bounds() {
    let g = build_free_group_graph(2).unwrap();
    assert!(UniformCycleSampler::new(&g, 0).is_err());
    assert!(UniformCycleSampler::new(&g, 513).is_err());
    assert!(UniformCycleSampler::new(&g, 512).is_ok());
}
