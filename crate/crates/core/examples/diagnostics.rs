//! Geometric diagnostics on a pair of pants: Gromov-product decay, the
//! translation-length/displacement residual, Hölder decay of the increment
//! and the bounded cocycle defect.

use geodesic_clt::coding_graph::build_free_group_graph;
use geodesic_clt::experiments::{bounded_defect, gromov_decay, holder_decay, tau_residual, DEFAULT_SEED};
use geodesic_clt::hyperbolic::{pair_of_pants_rep, HPoint};
use geodesic_clt::parry_markov::ParryChain;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = build_free_group_graph(2)?;
    let chain = ParryChain::new(&graph)?;
    let rep = pair_of_pants_rep(2.0, 2.0, 2.0, HPoint::i())?;
    let seed = DEFAULT_SEED;

    let decay = gromov_decay(&rep, &graph, &[0.25, 0.5], &[25, 50, 100], 2_000, seed)?;
    for row in &decay.rows {
        println!("decay eps={} n={:>3} exceed={:.4}", row.epsilon, row.n, row.exceed_fraction);
    }

    let residual = tau_residual(&rep, &graph, &[25, 50, 100], 2_000, seed)?;
    for row in &residual.rows {
        println!("residual n={:>3} max={:.3e} mean={:.3e}", row.n, row.max_residual, row.mean_residual);
    }

    let holder = holder_decay(&rep, &chain, 16, 200, 20, seed)?;
    println!("holder log slope {:.3}", holder.log_slope);

    let defect = bounded_defect(&rep, &chain, 120, &[30, 60, 90], 500, seed)?;
    for row in &defect.rows {
        println!("defect n={:>3} max={:.4} mean={:.4}", row.n, row.max_product, row.mean_product);
    }
    Ok(())
}
