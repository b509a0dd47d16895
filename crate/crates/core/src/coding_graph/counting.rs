use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::path::GraphPath;
use super::words::{smallest_period, ConjugacyClass, GroupWord};
use super::{CodingGraph, GraphError};
use crate::intmat::{IntMatrix, PowerTable};

/// Largest exponent accepted by the exact counting routines.
pub const MAX_COUNT_EXPONENT: usize = 10_000;

/// Default cap on the number of paths `enumerate_cycles` will materialize.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

fn check_exponent(n: usize) -> Result<(), GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidArgument("n must be at least 1".into()));
    }
    if n > MAX_COUNT_EXPONENT {
        return Err(GraphError::BudgetExceeded(format!(
            "n = {n} exceeds the counting cap of {MAX_COUNT_EXPONENT}"
        )));
    }
    Ok(())
}

/// Tr Mⁿ, the number of based closed paths of length n.
pub fn trace_power(graph: &CodingGraph, n: usize) -> Result<BigUint, GraphError> {
    check_exponent(n)?;
    Ok(graph.adjacency().pow(n as u64).trace())
}

/// #Ωⁿ, the number of paths of length n from any vertex (sum of entries of Mⁿ).
pub fn path_count(graph: &CodingGraph, n: usize) -> BigUint {
    graph.adjacency().pow(n as u64).entry_sum()
}

/// #Γₙ, primitive cycles of length n with the basepoint forgotten, from
/// n·#Γₙ = Tr Mⁿ − Σ_{d|n, d<n} d·#Γ_d.
pub fn count_primitive_cycles(graph: &CodingGraph, n: usize) -> Result<BigUint, GraphError> {
    check_exponent(n)?;
    let m = graph.adjacency();
    let mut memo: BTreeMap<usize, BigUint> = BTreeMap::new();
    primitive_count_memo(&m, n, &mut memo)
}

fn primitive_count_memo(
    m: &IntMatrix,
    n: usize,
    memo: &mut BTreeMap<usize, BigUint>,
) -> Result<BigUint, GraphError> {
    if let Some(v) = memo.get(&n) {
        return Ok(v.clone());
    }
    let mut rest = m.pow(n as u64).trace();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let gamma_d = primitive_count_memo(m, d, memo)?;
        let term = gamma_d * BigUint::from(d);
        if term > rest {
            return Err(GraphError::InternalInvariant(format!(
                "divisor sums exceed Tr M^{n}"
            )));
        }
        rest -= term;
    }
    let n_big = BigUint::from(n);
    if !(&rest % &n_big).is_zero() {
        return Err(GraphError::InternalInvariant(format!(
            "{rest} primitive based cycles of length {n} is not divisible by {n}"
        )));
    }
    let value = rest / n_big;
    memo.insert(n, value.clone());
    Ok(value)
}

/// Materializes every based closed path of length `n`, in lexicographic order
/// of (start vertex, edge indices).
pub fn enumerate_cycles(graph: &CodingGraph, n: usize) -> Result<Vec<GraphPath<'_>>, GraphError> {
    enumerate_cycles_with_budget(graph, n, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_cycles_with_budget(
    graph: &CodingGraph,
    n: usize,
    budget: u64,
) -> Result<Vec<GraphPath<'_>>, GraphError> {
    check_exponent(n)?;
    let table = PowerTable::new(&graph.adjacency(), n);
    let total = table.power(n).trace();
    if total > BigUint::from(budget) {
        return Err(GraphError::BudgetExceeded(format!(
            "{total} closed paths of length {n} exceeds the enumeration budget of {budget}"
        )));
    }
    let mut out = Vec::with_capacity(total.to_usize().unwrap_or(0));
    let mut stack = Vec::with_capacity(n);
    for s in 0..graph.vertex_count() {
        extend_cycles(graph, &table, s, s, n, &mut stack, &mut out);
    }
    debug_assert_eq!(BigUint::from(out.len()), total);
    Ok(out)
}

fn extend_cycles<'g>(
    graph: &'g CodingGraph,
    table: &PowerTable,
    start: usize,
    at: usize,
    remaining: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<GraphPath<'g>>,
) {
    if remaining == 0 {
        out.push(GraphPath::from_parts_unchecked(graph, start, stack.clone()));
        return;
    }
    for &e in graph.out_edges(at) {
        let next = graph.edge(e).target;
        if table.power(remaining - 1).get(next, start).is_zero() {
            continue;
        }
        stack.push(e);
        extend_cycles(graph, table, start, next, remaining - 1, stack, out);
        stack.pop();
    }
}

/// True iff the closed path's edge sequence is not a k-fold repetition
/// (k ≥ 2) of a shorter sequence.
pub fn is_primitive(cycle: &GraphPath<'_>) -> Result<bool, GraphError> {
    if !cycle.is_closed() {
        return Err(GraphError::InvalidArgument(
            "primitivity is defined for closed paths only".into(),
        ));
    }
    if cycle.is_empty() {
        return Ok(false);
    }
    Ok(smallest_period(cycle.edges()) == cycle.len())
}

/// The concatenated edge labels ev(p). On a coding graph this is a reduced
/// word whose length equals the path length.
pub fn evaluate_path(path: &GraphPath<'_>) -> GroupWord {
    let word = path.labels();
    debug_assert!(word.is_reduced(), "coding graph path {word} is not reduced");
    word
}

/// pₙ: the conjugacy class read off a closed path.
pub fn cycle_to_conjugacy_class(cycle: &GraphPath<'_>) -> Result<ConjugacyClass, GraphError> {
    if !cycle.is_closed() || cycle.is_empty() {
        return Err(GraphError::InvalidArgument(
            "conjugacy classes are read from closed paths of length at least 1".into(),
        ));
    }
    let word = cycle.labels();
    if !word.is_cyclically_reduced() {
        return Err(GraphError::InternalInvariant(format!(
            "closed path reads {word}, which is not cyclically reduced"
        )));
    }
    Ok(ConjugacyClass::from_cyclically_reduced(&word))
}
