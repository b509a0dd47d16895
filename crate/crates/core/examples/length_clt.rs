//! Self-normalized CLT for translation length and displacement of uniform
//! closed paths on a pair of pants.
//!
//! Run with `--release`; 20 000 samples per n.

use geodesic_clt::coding_graph::build_free_group_graph;
use geodesic_clt::experiments::{estimate_l_sigma, run_clt, CltOptions, StatisticKind, DEFAULT_SEED};
use geodesic_clt::hyperbolic::{pair_of_pants_rep, HPoint};
use geodesic_clt::parry_markov::ParryChain;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = build_free_group_graph(2)?;
    let chain = ParryChain::new(&graph)?;
    let rep = pair_of_pants_rep(2.0, 2.0, 2.0, HPoint::i())?;

    for kind in [StatisticKind::TranslationLength, StatisticKind::Displacement] {
        println!("{kind:?}");
        for n in [25, 50, 100, 200] {
            let opts = CltOptions::new(n, 20_000, DEFAULT_SEED).statistic(kind);
            let run = run_clt(&rep, &graph, &chain, &opts)?;
            let r = &run.report;
            println!("  n={n:>4}  L={:.5}  sigma={:.5}  KS={:.5}", r.l_hat, r.sigma_hat, r.ks_statistic);
        }
    }

    let opts = CltOptions::new(1, 5_000, DEFAULT_SEED);
    let est = estimate_l_sigma(&rep, &graph, &chain, &[100, 200], &opts)?;
    println!("\n{}", serde_json::to_string_pretty(&est)?);
    Ok(())
}
