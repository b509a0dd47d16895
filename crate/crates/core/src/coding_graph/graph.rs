use std::fmt::Write as _;

use num_integer::Integer;
use sha2::{Digest, Sha256};

use super::words::{GeneratorLabel, Sign};
use super::GraphError;
use crate::intmat::IntMatrix;

/// Largest vertex count accepted. Bounds the size of cached power tables.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: GeneratorLabel,
}

/// Labeled directed graph whose closed paths code conjugacy classes.
///
/// Immutable once built; construction verifies that the adjacency matrix is
/// aperiodic and records the least k with Mᵏ > 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodingGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
    counts: Vec<u64>,
    primitivity_exponent: usize,
}

impl CodingGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::InvalidParameter(
                "graph needs at least one vertex".into(),
            ));
        }
        if vertex_count > MAX_VERTICES {
            return Err(GraphError::InvalidParameter(format!(
                "{vertex_count} vertices exceeds the cap of {MAX_VERTICES}"
            )));
        }
        let mut out_edges = vec![Vec::new(); vertex_count];
        let mut counts = vec![0u64; vertex_count * vertex_count];
        for (idx, e) in edges.iter().enumerate() {
            if e.source >= vertex_count || e.target >= vertex_count {
                return Err(GraphError::InvalidParameter(format!(
                    "edge {} -> {} out of range for {vertex_count} vertices",
                    e.source, e.target
                )));
            }
            out_edges[e.source].push(idx);
            counts[e.source * vertex_count + e.target] += 1;
        }
        let primitivity_exponent = aperiodicity_certificate(vertex_count, &counts)?;
        Ok(Self {
            vertex_count,
            edges,
            out_edges,
            counts,
            primitivity_exponent,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    pub fn out_edges(&self, vertex: usize) -> &[usize] {
        &self.out_edges[vertex]
    }

    /// mᵢⱼ, the number of edges from i to j.
    pub fn multiplicity(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.vertex_count + j]
    }

    pub fn adjacency(&self) -> IntMatrix {
        IntMatrix::from_counts(self.vertex_count, &self.counts)
    }

    pub fn adjacency_f64(&self) -> Vec<Vec<f64>> {
        (0..self.vertex_count)
            .map(|i| {
                (0..self.vertex_count)
                    .map(|j| self.multiplicity(i, j) as f64)
                    .collect()
            })
            .collect()
    }

    /// Least k with every entry of Mᵏ positive.
    pub fn primitivity_exponent(&self) -> usize {
        self.primitivity_exponent
    }

    /// Largest generator index on any edge (the rank of the coded free group).
    pub fn rank(&self) -> u32 {
        self.edges.iter().map(|e| e.label.index()).max().unwrap_or(0)
    }

    /// Serializes to the line-oriented graph file format.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "vertices {}", self.vertex_count).unwrap();
        for e in &self.edges {
            let sign = match e.label.sign() {
                Sign::Plus => '+',
                Sign::Minus => '-',
            };
            writeln!(
                s,
                "edge {} {} {} {}",
                e.source,
                e.target,
                e.label.index(),
                sign
            )
            .unwrap();
        }
        s
    }

    /// SHA-256 of the canonical file serialization, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_file_string().as_bytes()))
    }
}

/// The non-backtracking graph of the free group F_N: vertex `a_i^ε` has an edge
/// labeled `a_j^η` to vertex `a_j^η` unless that letter is the inverse of `a_i^ε`.
///
/// Vertex 2(i−1) is `a_i`, vertex 2(i−1)+1 is `a_i⁻¹`.
pub fn build_free_group_graph(rank: u32) -> Result<CodingGraph, GraphError> {
    if rank < 2 {
        return Err(GraphError::InvalidParameter(format!(
            "free group rank must be at least 2, got {rank}"
        )));
    }
    let alphabet = GeneratorLabel::alphabet(rank);
    let mut edges = Vec::with_capacity(alphabet.len() * (alphabet.len() - 1));
    for (src, &from) in alphabet.iter().enumerate() {
        for (dst, &to) in alphabet.iter().enumerate() {
            if !from.is_inverse_of(to) {
                edges.push(Edge {
                    source: src,
                    target: dst,
                    label: to,
                });
            }
        }
    }
    CodingGraph::new(alphabet.len(), edges)
}

/// Vertex of the free-group graph that corresponds to a letter.
pub fn free_group_vertex(label: GeneratorLabel) -> usize {
    2 * (label.index() as usize - 1) + usize::from(label.sign() == Sign::Minus)
}

/// Parses the graph file format:
///
/// ```text
/// # comment
/// vertices 4
/// edge 0 1 2 +
/// ```
///
/// Vertex indices are 0-based, `gen_index` is 1-based. Loaded graphs may code
/// conjugacy classes with finitely many exceptions that are not modeled here.
pub fn load_graph(content: &str) -> Result<CodingGraph, GraphError> {
    let mut vertex_count: Option<usize> = None;
    let mut edges = Vec::new();
    for (lineno, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let line_no = lineno + 1;
        let err = |message: String| GraphError::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "vertices" => {
                if vertex_count.is_some() {
                    return Err(err("duplicate `vertices` header".into()));
                }
                if fields.len() != 2 {
                    return Err(err("expected `vertices <count>`".into()));
                }
                let count = fields[1]
                    .parse()
                    .map_err(|e| err(format!("bad vertex count {:?}: {e}", fields[1])))?;
                vertex_count = Some(count);
            }
            "edge" => {
                let count =
                    vertex_count.ok_or_else(|| err("`edge` before `vertices` header".into()))?;
                if fields.len() != 5 {
                    return Err(err(
                        "expected `edge <src> <dst> <gen_index> <sign>`".into()
                    ));
                }
                let parse_vertex = |s: &str| -> Result<usize, GraphError> {
                    let v: usize = s
                        .parse()
                        .map_err(|e| err(format!("bad vertex {s:?}: {e}")))?;
                    if v >= count {
                        return Err(err(format!("vertex {v} out of range 0..{count}")));
                    }
                    Ok(v)
                };
                let source = parse_vertex(fields[1])?;
                let target = parse_vertex(fields[2])?;
                let index: u32 = fields[3]
                    .parse()
                    .map_err(|e| err(format!("bad generator index {:?}: {e}", fields[3])))?;
                let sign = match fields[4] {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    other => return Err(err(format!("sign must be + or -, got {other:?}"))),
                };
                let label = GeneratorLabel::new(index, sign).map_err(|e| err(e.to_string()))?;
                edges.push(Edge {
                    source,
                    target,
                    label,
                });
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    let count = vertex_count.ok_or(GraphError::Parse {
        line: 0,
        message: "missing `vertices` header".into(),
    })?;
    CodingGraph::new(count, edges)
}

/// Boolean powers B, B², … up to B^(V²); returns the first k with Bᵏ all true,
/// or an error naming why no such k exists.
fn aperiodicity_certificate(n: usize, counts: &[u64]) -> Result<usize, GraphError> {
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let rows: Vec<u64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| counts[i * n + j] > 0)
                .fold(0u64, |acc, j| acc | (1 << j))
        })
        .collect();
    let mut current = rows.clone();
    for k in 1..=n * n {
        if current.iter().all(|&r| r == full) {
            return Ok(k);
        }
        current = current
            .iter()
            .map(|&r| {
                (0..n)
                    .filter(|&j| r & (1 << j) != 0)
                    .fold(0u64, |acc, j| acc | rows[j])
            })
            .collect();
    }
    Err(GraphError::NotAperiodic(period_obstruction(n, &rows)))
}

fn period_obstruction(n: usize, rows: &[u64]) -> String {
    if let Some(v) = (0..n).find(|&v| rows[v] == 0) {
        return format!("vertex {v} has no outgoing edge");
    }
    if let Some(v) = (0..n).find(|&v| rows.iter().all(|&r| r & (1 << v) == 0)) {
        return format!("vertex {v} has no incoming edge");
    }
    // BFS levels from vertex 0 give the period as a gcd of level defects.
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for v in (0..n).filter(|&v| rows[u] & (1 << v) != 0) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if let Some(v) = level.iter().position(|&l| l == usize::MAX) {
        return format!("graph is not strongly connected (vertex {v} unreachable from vertex 0)");
    }
    let mut period = 0usize;
    for u in 0..n {
        for v in (0..n).filter(|&v| rows[u] & (1 << v) != 0) {
            let defect = (level[u] + 1).abs_diff(level[v]);
            period = period.gcd(&defect);
        }
    }
    if period > 1 {
        format!("graph is periodic with period {period}")
    } else {
        "graph is not strongly connected".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_group_graph_shape() {
        let g = build_free_group_graph(2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 12);
        for i in 0..4 {
            let row: u64 = (0..4).map(|j| g.multiplicity(i, j)).sum();
            assert_eq!(row, 3);
        }
        let g3 = build_free_group_graph(3).unwrap();
        assert_eq!(g3.vertex_count(), 6);
        assert_eq!(g3.edge_count(), 30);
        for i in 0..6 {
            assert_eq!((0..6).map(|j| g3.multiplicity(i, j)).sum::<u64>(), 5);
        }
    }

    #[test]
    fn rank_one_is_rejected() {
        assert!(matches!(
            build_free_group_graph(1),
            Err(GraphError::InvalidParameter(_))
        ));
    }

    #[test]
    fn f2_primitivity_exponent_is_two() {
        let g = build_free_group_graph(2).unwrap();
        // M itself has zeros (no a -> a⁻¹ edge), M² is strictly positive.
        let m2 = g.adjacency().pow(2);
        assert!((0..4).all(|i| (0..4).all(|j| m2.get(i, j) > &0u32.into())));
        assert_eq!(g.primitivity_exponent(), 2);
    }

    #[test]
    fn edge_labels_match_target_vertex() {
        let g = build_free_group_graph(3).unwrap();
        for e in g.edges() {
            assert_eq!(free_group_vertex(e.label), e.target);
        }
    }

    #[test]
    fn file_round_trip() {
        let g = build_free_group_graph(2).unwrap();
        let loaded = load_graph(&g.to_file_string()).unwrap();
        assert_eq!(loaded, g);
        assert_eq!(loaded.content_hash(), g.content_hash());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# golden mean shift\nvertices 2\n\nedge 0 0 1 + # loop\nedge 0 1 2 +\nedge 1 0 1 -\n";
        let g = load_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn sink_vertex_is_rejected() {
        let text = "vertices 2\nedge 0 0 1 +\nedge 0 1 2 +\n";
        match load_graph(text) {
            Err(GraphError::NotAperiodic(msg)) => assert!(msg.contains("no outgoing"), "{msg}"),
            other => panic!("expected aperiodicity failure, got {other:?}"),
        }
    }

    #[test]
    fn two_cycle_is_periodic() {
        let text = "vertices 2\nedge 0 1 1 +\nedge 1 0 1 -\n";
        match load_graph(text) {
            Err(GraphError::NotAperiodic(msg)) => assert!(msg.contains("period 2"), "{msg}"),
            other => panic!("expected aperiodicity failure, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match load_graph("vertices 2\nedge 0 5 1 +\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match load_graph("vertices 2\nedge 0 1 1 *\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            load_graph("edge 0 1 1 +\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(load_graph(""), Err(GraphError::Parse { .. })));
    }
}
