//! Density of the prefix law of a uniform closed path against the Markov
//! prefix law.
//!
//! For a prefix γ of length n−m from vertex i to vertex j,
//!
//! ```text
//! dλ_{n,m}/dν_{n,m}(γ) = (Mᵐ)ⱼᵢ / Tr Mⁿ · λⁿ⁻ᵐ / (uᵢ vⱼ)
//! ```
//!
//! The integer counts are exact. λ, u, v enter as the exact binary values of
//! their f64 approximations, so the only rounding is in the eigendata itself
//! and in the final conversion to f64.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{MarkovError, ParryChain};
use crate::coding_graph::{CodingGraph, GraphPath};
use crate::intmat::IntMatrix;

/// Number of trailing edges cut from a length-n path in the prefix
/// construction: ⌈ln n⌉ (natural log), and 0 for n ≤ 1.
pub fn log_cut(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (n as f64).ln().ceil() as usize
    }
}

fn check_orders(n: usize, m: usize) -> Result<(), MarkovError> {
    if m == 0 || m >= n {
        return Err(MarkovError::InvalidArgument(format!(
            "need 1 <= m < n, got n = {n}, m = {m}"
        )));
    }
    Ok(())
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite eigendata")
}

fn big(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// Precomputed pieces shared by every prefix at a fixed (n, m).
struct RnTerms {
    m_power: IntMatrix,
    trace: BigRational,
    lambda_power: BigRational,
}

impl RnTerms {
    fn new(graph: &CodingGraph, chain: &ParryChain<'_>, n: usize, m: usize) -> Self {
        let adjacency = graph.adjacency();
        let m_power = adjacency.pow(m as u64);
        let trace = big(&adjacency.pow(n as u64).trace());
        let lambda_power = exact(chain.perron().lambda).pow((n - m) as i32);
        Self {
            m_power,
            trace,
            lambda_power,
        }
    }

    fn value(&self, chain: &ParryChain<'_>, start: usize, end: usize) -> BigRational {
        let perron = chain.perron();
        let returns = big(self.m_power.get(end, start));
        let denom = &self.trace * exact(perron.u[start]) * exact(perron.v[end]);
        returns * &self.lambda_power / denom
    }
}

/// The density as an exact rational in the f64 eigendata.
pub fn rn_derivative_exact(
    graph: &CodingGraph,
    chain: &ParryChain<'_>,
    n: usize,
    m: usize,
    prefix: &GraphPath<'_>,
) -> Result<BigRational, MarkovError> {
    check_orders(n, m)?;
    if prefix.len() != n - m {
        return Err(MarkovError::InvalidArgument(format!(
            "prefix has length {}, expected n - m = {}",
            prefix.len(),
            n - m
        )));
    }
    Ok(RnTerms::new(graph, chain, n, m).value(chain, prefix.start(), prefix.end()))
}

pub fn rn_derivative(
    graph: &CodingGraph,
    chain: &ParryChain<'_>,
    n: usize,
    m: usize,
    prefix: &GraphPath<'_>,
) -> Result<f64, MarkovError> {
    let value = rn_derivative_exact(graph, chain, n, m, prefix)?;
    Ok(value.to_f64().unwrap_or(f64::INFINITY))
}

/// sup over prefixes γ ∈ Ωⁿ⁻ᵐ of |dλ_{n,m}/dν_{n,m}(γ) − 1|. The density depends
/// only on the endpoints (i, j), so the sup runs over pairs joined by at least
/// one path of length n−m.
pub fn rn_sup_deviation(
    graph: &CodingGraph,
    chain: &ParryChain<'_>,
    n: usize,
    m: usize,
) -> Result<f64, MarkovError> {
    check_orders(n, m)?;
    let terms = RnTerms::new(graph, chain, n, m);
    let reach = graph.adjacency().pow((n - m) as u64);
    let one = BigRational::from_integer(1.into());
    let mut sup = BigRational::zero();
    for i in 0..graph.vertex_count() {
        for j in 0..graph.vertex_count() {
            if reach.get(i, j).is_zero() {
                continue;
            }
            let dev = (terms.value(chain, i, j) - &one).abs();
            if dev > sup {
                sup = dev;
            }
        }
    }
    Ok(sup.to_f64().unwrap_or(f64::INFINITY))
}
