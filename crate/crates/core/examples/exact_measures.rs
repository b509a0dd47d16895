//! Exact comparisons: total variation between the pushforward of uniform
//! closed paths and the uniform measure on conjugacy classes, and the
//! prefix-density sup deviation between νₙ and νₘ.

use geodesic_clt::coding_graph::build_free_group_graph;
use geodesic_clt::experiments::{rn_convergence, tv_report};
use geodesic_clt::parry_markov::ParryChain;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = build_free_group_graph(2)?;
    let tv = tv_report(&graph, &[4, 6, 8, 10, 11])?;
    println!("{:>3} {:>8} {:>8} {:>12}", "n", "cycles", "classes", "tv");
    for row in &tv.rows {
        println!("{:>3} {:>8} {:>8} {:>12.4e}", row.n, row.cycles, row.classes, row.tv_distance);
    }

    let chain = ParryChain::new(&graph)?;
    let pairs: Vec<(usize, usize)> = (1..=6).map(|t| (10 * t, 5 * t)).collect();
    let rn = rn_convergence(&graph, &chain, &pairs)?;
    println!("\n{:>4} {:>4} {:>12}", "n", "m", "sup |dN-1|");
    for row in &rn.rows {
        println!("{:>4} {:>4} {:>12.4e}", row.n, row.m, row.sup_deviation);
    }
    Ok(())
}
