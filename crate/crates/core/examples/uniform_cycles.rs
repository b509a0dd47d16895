//! Exact uniform sampling of closed paths of length n.

use geodesic_clt::coding_graph::{build_free_group_graph, is_primitive};
use geodesic_clt::parry_markov::{SeededRng, UniformCycleSampler};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = build_free_group_graph(2)?;
    let sampler = UniformCycleSampler::new(&graph, 30)?;
    println!("closed paths of length 30: {}", sampler.total());
    println!("rank 0 unranks to {}", sampler.unrank(&0u32.into())?.labels());

    let mut rng = SeededRng::new(42, 0);
    let mut primitive = 0;
    let draws = 2000;
    for i in 0..draws {
        let cycle = sampler.sample(&mut rng);
        if is_primitive(&cycle)? {
            primitive += 1;
        }
        if i < 3 {
            println!("sample {}", cycle.labels());
        }
    }
    println!("primitive fraction: {:.4}", primitive as f64 / draws as f64);
    Ok(())
}
