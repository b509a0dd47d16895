use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use super::MarkovError;
use crate::coding_graph::{CodingGraph, GraphPath};
use crate::intmat::PowerTable;

/// Longest closed path the sampler will precompute counts for. The power
/// table holds (n+1)·V² big integers.
pub const MAX_SAMPLER_LENGTH: usize = 512;

/// Exactly uniform sampler on 𝒞ₙ, the based closed paths of length n.
///
/// Closed paths are ranked lexicographically by (start vertex, edge indices).
/// A uniform rank in [0, Tr Mⁿ) is drawn and decoded using the exact counts
/// (Mᵏ)ⱼₛ of ways to return to the start s in k steps, so every conditional
/// choice has probability mᵢⱼ (Mᵏ⁻¹)ⱼₛ / (Mᵏ)ᵢₛ.
#[derive(Debug, Clone)]
pub struct UniformCycleSampler<'g> {
    graph: &'g CodingGraph,
    n: usize,
    powers: PowerTable,
    total: BigUint,
}

impl<'g> UniformCycleSampler<'g> {
    pub fn new(graph: &'g CodingGraph, n: usize) -> Result<Self, MarkovError> {
        if n == 0 {
            return Err(MarkovError::InvalidArgument(
                "closed paths must have length at least 1".into(),
            ));
        }
        if n > MAX_SAMPLER_LENGTH {
            return Err(MarkovError::BudgetExceeded(format!(
                "closed path length {n} exceeds the sampler cap of {MAX_SAMPLER_LENGTH}"
            )));
        }
        let powers = PowerTable::new(&graph.adjacency(), n);
        let total = powers.power(n).trace();
        if total.is_zero() {
            return Err(MarkovError::InvalidArgument(format!(
                "graph has no closed paths of length {n}"
            )));
        }
        Ok(Self {
            graph,
            n,
            powers,
            total,
        })
    }

    pub fn length(&self) -> usize {
        self.n
    }

    /// Tr Mⁿ.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn graph(&self) -> &'g CodingGraph {
        self.graph
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GraphPath<'g> {
        let rank = random_below(&self.total, rng);
        self.unrank(&rank).expect("rank drawn below total")
    }

    /// The closed path with the given lexicographic rank.
    pub fn unrank(&self, rank: &BigUint) -> Result<GraphPath<'g>, MarkovError> {
        if rank >= &self.total {
            return Err(MarkovError::InvalidArgument(format!(
                "rank {rank} out of range for {} closed paths",
                self.total
            )));
        }
        let mut rest = rank.clone();
        let full = self.powers.power(self.n);
        let mut start = self.graph.vertex_count();
        for s in 0..self.graph.vertex_count() {
            let count = full.get(s, s);
            if &rest < count {
                start = s;
                break;
            }
            rest -= count;
        }
        debug_assert!(start < self.graph.vertex_count());

        let mut edges = Vec::with_capacity(self.n);
        let mut at = start;
        for remaining in (1..=self.n).rev() {
            let after = self.powers.power(remaining - 1);
            let mut chosen = None;
            for &e in self.graph.out_edges(at) {
                let count = after.get(self.graph.edge(e).target, start);
                if &rest < count {
                    chosen = Some(e);
                    break;
                }
                rest -= count;
            }
            let e = chosen.ok_or_else(|| {
                MarkovError::InternalInvariant("closed-path counts are inconsistent".into())
            })?;
            edges.push(e);
            at = self.graph.edge(e).target;
        }
        Ok(GraphPath::new(self.graph, start, edges)?)
    }
}

/// Uniform integer in [0, bound) by rejection on `bound.bits()` random bits.
pub fn random_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (words as u64 - 1);
    let mask: u32 = if top_bits == 32 { u32::MAX } else { (1u32 << top_bits) - 1 };
    let mut digits = vec![0u32; words];
    loop {
        for d in digits.iter_mut() {
            *d = rng.next_u32();
        }
        digits[words - 1] &= mask;
        let candidate = BigUint::from_slice(&digits);
        if &candidate < bound {
            return candidate;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding_graph::{build_free_group_graph, enumerate_cycles};
    use crate::parry_markov::SeededRng;

    #[test]
    fn unranking_reproduces_enumeration_order() {
        let g = build_free_group_graph(2).unwrap();
        for n in 1..=6 {
            let sampler = UniformCycleSampler::new(&g, n).unwrap();
            let listed = enumerate_cycles(&g, n).unwrap();
            assert_eq!(BigUint::from(listed.len()), *sampler.total());
            for (r, c) in listed.iter().enumerate() {
                assert_eq!(&sampler.unrank(&BigUint::from(r)).unwrap(), c);
            }
            assert!(sampler.unrank(sampler.total()).is_err());
        }
    }

    #[test]
    fn samples_are_closed_with_requested_length() {
        let g = build_free_group_graph(2).unwrap();
        let mut rng = SeededRng::new(11, 0);
        for n in [1usize, 2, 7, 50, 200] {
            let sampler = UniformCycleSampler::new(&g, n).unwrap();
            for _ in 0..20 {
                let c = sampler.sample(&mut rng);
                assert!(c.is_closed());
                assert_eq!(c.len(), n);
            }
        }
    }

    #[test]
    fn length_cap() {
        let g = build_free_group_graph(2).unwrap();
        assert!(matches!(
            UniformCycleSampler::new(&g, MAX_SAMPLER_LENGTH + 1),
            Err(MarkovError::BudgetExceeded(_))
        ));
        assert!(UniformCycleSampler::new(&g, 0).is_err());
    }

    #[test]
    fn random_below_stays_in_range() {
        let mut rng = SeededRng::new(5, 0);
        for bound in [1u64, 2, 3, 7, 1 << 32, (1 << 32) + 1, u64::MAX] {
            let b = BigUint::from(bound);
            for _ in 0..200 {
                assert!(random_below(&b, &mut rng) < b);
            }
        }
    }

    #[test]
    fn random_below_small_bound_is_uniform() {
        let mut rng = SeededRng::new(9, 0);
        let b = BigUint::from(3u32);
        let mut counts = [0usize; 3];
        for _ in 0..30_000 {
            let x: usize = random_below(&b, &mut rng).try_into().unwrap();
            counts[x] += 1;
        }
        for c in counts {
            assert!((c as f64 - 10_000.0).abs() < 400.0, "{counts:?}");
        }
    }
}
