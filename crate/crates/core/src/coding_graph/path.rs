use super::words::GroupWord;
use super::{CodingGraph, GraphError};

/// A finite directed path in a coding graph, stored as a start vertex plus an
/// edge sequence. The empty path sits at its start vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphPath<'g> {
    graph: &'g CodingGraph,
    start: usize,
    edges: Vec<usize>,
}

impl<'g> GraphPath<'g> {
    pub fn new(graph: &'g CodingGraph, start: usize, edges: Vec<usize>) -> Result<Self, GraphError> {
        if start >= graph.vertex_count() {
            return Err(GraphError::InvalidArgument(format!(
                "start vertex {start} out of range"
            )));
        }
        let mut at = start;
        for (pos, &e) in edges.iter().enumerate() {
            let edge = graph.edges().get(e).ok_or_else(|| {
                GraphError::InvalidArgument(format!("edge index {e} out of range"))
            })?;
            if edge.source != at {
                return Err(GraphError::InvalidArgument(format!(
                    "edge {e} at position {pos} starts at {} but the path is at {at}",
                    edge.source
                )));
            }
            at = edge.target;
        }
        Ok(Self { graph, start, edges })
    }

    /// Builds a path from edges known to compose; checked in debug builds only.
    pub(crate) fn from_parts_unchecked(graph: &'g CodingGraph, start: usize, edges: Vec<usize>) -> Self {
        debug_assert!(Self::new(graph, start, edges.clone()).is_ok());
        Self { graph, start, edges }
    }

    pub fn empty(graph: &'g CodingGraph, vertex: usize) -> Result<Self, GraphError> {
        Self::new(graph, vertex, Vec::new())
    }

    pub fn graph(&self) -> &'g CodingGraph {
        self.graph
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.edges
            .last()
            .map_or(self.start, |&e| self.graph.edge(e).target)
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end()
    }

    /// Vertex sequence x₀ … xₙ.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        out.push(self.start);
        out.extend(self.edges.iter().map(|&e| self.graph.edge(e).target));
        out
    }

    /// The first `k` edges.
    pub fn prefix(&self, k: usize) -> Result<GraphPath<'g>, GraphError> {
        if k > self.len() {
            return Err(GraphError::InvalidArgument(format!(
                "prefix length {k} exceeds path length {}",
                self.len()
            )));
        }
        Ok(Self {
            graph: self.graph,
            start: self.start,
            edges: self.edges[..k].to_vec(),
        })
    }

    /// Drops the first edge. The shift of an empty path is an error.
    pub fn shift(&self) -> Result<GraphPath<'g>, GraphError> {
        self.shift_by(1)
    }

    /// Drops the first `k` edges (Tᵏ).
    pub fn shift_by(&self, k: usize) -> Result<GraphPath<'g>, GraphError> {
        if k > self.len() {
            return Err(GraphError::InvalidArgument(format!(
                "cannot shift a length-{} path by {k}",
                self.len()
            )));
        }
        let start = if k == 0 {
            self.start
        } else {
            self.graph.edge(self.edges[k - 1]).target
        };
        Ok(Self {
            graph: self.graph,
            start,
            edges: self.edges[k..].to_vec(),
        })
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &GraphPath<'g>) -> Result<GraphPath<'g>, GraphError> {
        if other.start != self.end() {
            return Err(GraphError::InvalidArgument(format!(
                "cannot append a path starting at {} to one ending at {}",
                other.start,
                self.end()
            )));
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Self {
            graph: self.graph,
            start: self.start,
            edges,
        })
    }

    /// Rotates a closed path so that it starts after its first `k` edges.
    pub fn rotated(&self, k: usize) -> Result<GraphPath<'g>, GraphError> {
        if !self.is_closed() {
            return Err(GraphError::InvalidArgument(
                "only closed paths can be rotated".into(),
            ));
        }
        if self.edges.is_empty() {
            return Ok(self.clone());
        }
        let k = k % self.edges.len();
        let mut edges = self.edges.clone();
        edges.rotate_left(k);
        let start = if k == 0 {
            self.start
        } else {
            self.graph.edge(self.edges[k - 1]).target
        };
        Ok(Self {
            graph: self.graph,
            start,
            edges,
        })
    }

    /// Reads off edge labels: ev(e₁ ⋯ eₙ) = ev(e₁) ⋯ ev(eₙ).
    pub fn labels(&self) -> GroupWord {
        GroupWord::from_letters(
            self.edges
                .iter()
                .map(|&e| self.graph.edge(e).label)
                .collect(),
        )
    }
}
