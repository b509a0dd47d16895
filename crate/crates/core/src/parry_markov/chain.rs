use rand::Rng;

use super::perron::{perron_frobenius, PerronData, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};
use super::MarkovError;
use crate::coding_graph::{CodingGraph, GraphPath};

/// The Parry (maximal entropy) Markov chain on a coding graph:
/// πᵢ = uᵢvᵢ and qᵢⱼ = mᵢⱼ vⱼ / (λ vᵢ).
#[derive(Debug, Clone)]
pub struct ParryChain<'g> {
    graph: &'g CodingGraph,
    perron: PerronData,
    pi: Vec<f64>,
    q: Vec<Vec<f64>>,
    pi_cumulative: Vec<f64>,
    /// Per vertex, cumulative probabilities over its out-edges (in
    /// `out_edges` order). Each edge i→j carries vⱼ / (λ vᵢ).
    edge_cumulative: Vec<Vec<f64>>,
}

impl<'g> ParryChain<'g> {
    pub fn new(graph: &'g CodingGraph) -> Result<Self, MarkovError> {
        let perron = perron_frobenius(&graph.adjacency_f64(), DEFAULT_TOLERANCE, DEFAULT_MAX_ITER)?;
        Ok(Self::from_perron(graph, perron))
    }

    pub fn from_perron(graph: &'g CodingGraph, perron: PerronData) -> Self {
        let n = graph.vertex_count();
        let pi: Vec<f64> = (0..n).map(|i| perron.u[i] * perron.v[i]).collect();
        let q: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        graph.multiplicity(i, j) as f64 * perron.v[j] / (perron.lambda * perron.v[i])
                    })
                    .collect()
            })
            .collect();
        let pi_cumulative = cumulative(pi.iter().copied());
        let edge_cumulative = (0..n)
            .map(|i| {
                cumulative(graph.out_edges(i).iter().map(|&e| {
                    perron.v[graph.edge(e).target] / (perron.lambda * perron.v[i])
                }))
            })
            .collect();
        Self {
            graph,
            perron,
            pi,
            q,
            pi_cumulative,
            edge_cumulative,
        }
    }

    pub fn graph(&self) -> &'g CodingGraph {
        self.graph
    }

    pub fn perron(&self) -> &PerronData {
        &self.perron
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn q(&self) -> &[Vec<f64>] {
        &self.q
    }

    /// Probability that a single step from the source of `edge` takes it.
    pub fn edge_probability(&self, edge: usize) -> f64 {
        let e = self.graph.edge(edge);
        self.perron.v[e.target] / (self.perron.lambda * self.perron.v[e.source])
    }

    /// ν(C(x)) = π_{x₀} q_{x₀x₁} ⋯, computed per edge so parallel edges are
    /// distinguished.
    pub fn cylinder_probability(&self, path: &GraphPath<'_>) -> f64 {
        path.edges()
            .iter()
            .fold(self.pi[path.start()], |p, &e| p * self.edge_probability(e))
    }

    /// Largest deviation among: row sums of Q from 1, Σπ from 1, and πᵀQ from πᵀ.
    pub fn invariant_defect(&self) -> f64 {
        let n = self.pi.len();
        let rows = self
            .q
            .iter()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max);
        let total = (self.pi.iter().sum::<f64>() - 1.0).abs();
        let stationary = (0..n)
            .map(|j| {
                let pq: f64 = (0..n).map(|i| self.pi[i] * self.q[i][j]).sum();
                (pq - self.pi[j]).abs()
            })
            .fold(0.0, f64::max);
        rows.max(total).max(stationary)
    }

    /// A draw from νₙ: start vertex from π, then `n` steps of Q.
    pub fn sample_path<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> GraphPath<'g> {
        let mut at = pick(&self.pi_cumulative, rng);
        let start = at;
        let mut edges = Vec::with_capacity(n);
        for _ in 0..n {
            let slot = pick(&self.edge_cumulative[at], rng);
            let e = self.graph.out_edges(at)[slot];
            edges.push(e);
            at = self.graph.edge(e).target;
        }
        GraphPath::from_parts_unchecked(self.graph, start, edges)
    }

    /// Continues a path by `n` further Markov steps from its end vertex.
    pub fn extend_path<R: Rng + ?Sized>(&self, path: &GraphPath<'g>, n: usize, rng: &mut R) -> GraphPath<'g> {
        let mut at = path.end();
        let mut edges = path.edges().to_vec();
        for _ in 0..n {
            let slot = pick(&self.edge_cumulative[at], rng);
            let e = self.graph.out_edges(at)[slot];
            edges.push(e);
            at = self.graph.edge(e).target;
        }
        GraphPath::from_parts_unchecked(self.graph, path.start(), edges)
    }
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

/// Index drawn proportionally to the increments of a cumulative table. The
/// draw is scaled by the table's total so rounding in Σ never leaves a gap.
fn pick<R: Rng + ?Sized>(cumulative: &[f64], rng: &mut R) -> usize {
    let total = *cumulative.last().expect("nonempty distribution");
    let r = rng.random::<f64>() * total;
    cumulative
        .iter()
        .position(|&c| r < c)
        .unwrap_or(cumulative.len() - 1)
}
