//! Perron data and the Parry measure of the F₂ coding graph, plus a few
//! sampled Markov paths.

use geodesic_clt::coding_graph::build_free_group_graph;
use geodesic_clt::parry_markov::{ParryChain, SeededRng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = build_free_group_graph(2)?;
    let chain = ParryChain::new(&graph)?;
    let perron = chain.perron();
    println!("lambda = {:.12}", perron.lambda);
    println!("pi     = {:?}", chain.pi());
    println!("q row 0 = {:?}", chain.q()[0]);
    println!("|pi Q - pi| = {:.2e}", chain.invariant_defect());

    let mut rng = SeededRng::new(1, 0);
    for _ in 0..3 {
        let path = chain.sample_path(12, &mut rng);
        println!("path {}  (prob {:.3e})", path.labels(), chain.cylinder_probability(&path));
    }
    Ok(())
}
