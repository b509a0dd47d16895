//! Square matrices of arbitrary-precision nonnegative integers.
//!
//! Entries of Mⁿ grow like λⁿ, so every counting identity on the coding graph
//! is evaluated here, exactly.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigUint>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![BigUint::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigUint::one();
        }
        m
    }

    pub fn from_counts(dim: usize, counts: &[u64]) -> Self {
        assert_eq!(counts.len(), dim * dim, "count table must be dim x dim");
        Self {
            dim,
            data: counts.iter().map(|&c| BigUint::from(c)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> BigUint {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Sum of all entries, i.e. 1ᵀ M 1.
    pub fn entry_sum(&self) -> BigUint {
        self.data.iter().sum()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Mᵉ by repeated squaring.
    pub fn pow(&self, mut e: u64) -> IntMatrix {
        let mut result = IntMatrix::identity(self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.get(i, j).to_f64().unwrap_or(f64::INFINITY))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        f.debug_struct("IntMatrix").field("rows", &rows).finish()
    }
}

/// The cached sequence M⁰, M¹, …, Mⁿ.
#[derive(Debug, Clone)]
pub struct PowerTable {
    powers: Vec<IntMatrix>,
}

impl PowerTable {
    pub fn new(base: &IntMatrix, max_exponent: usize) -> Self {
        let mut powers = Vec::with_capacity(max_exponent + 1);
        powers.push(IntMatrix::identity(base.dim()));
        for k in 1..=max_exponent {
            let next = powers[k - 1].mul(base);
            powers.push(next);
        }
        Self { powers }
    }

    pub fn max_exponent(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn power(&self, k: usize) -> &IntMatrix {
        &self.powers[k]
    }
}

/// Natural log of a big integer, accurate to f64 precision for any size.
pub fn big_ln(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
