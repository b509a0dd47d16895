//! Closed-path counts on the free-group coding graph, checked against the
//! closed form for F₂.

use geodesic_clt::coding_graph::{build_free_group_graph, count_primitive_cycles, enumerate_cycles, trace_power};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = build_free_group_graph(2)?;
    println!("F2 coding graph: {} vertices, {} edges", graph.vertex_count(), graph.edge_count());
    println!("{:>3} {:>24} {:>24}", "n", "Tr M^n", "primitive classes");
    for n in [1usize, 2, 3, 6, 10, 20, 40] {
        let trace = trace_power(&graph, n)?;
        let primitive = count_primitive_cycles(&graph, n)?;
        println!("{n:>3} {trace:>24} {primitive:>24}");
    }

    // Tr M⁴ = 3⁴ + 3 = 84 closed paths, listed explicitly.
    let cycles = enumerate_cycles(&graph, 4)?;
    println!("\n{} closed paths of length 4, first five:", cycles.len());
    for c in cycles.iter().take(5) {
        println!("  {}", c.labels());
    }
    Ok(())
}
