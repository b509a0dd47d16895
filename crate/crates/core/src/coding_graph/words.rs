use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GraphError;

/// Sign of a generator letter. `Plus` orders before `Minus`, which gives the
/// letter order a < a⁻¹ < b < b⁻¹ < … used for canonical rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A letter of S ∪ S⁻¹: generator `index` (1-based) with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratorLabel {
    index: u32,
    sign: Sign,
}

impl GeneratorLabel {
    pub fn new(index: u32, sign: Sign) -> Result<Self, GraphError> {
        if index == 0 {
            return Err(GraphError::InvalidParameter(
                "generator indices are 1-based".into(),
            ));
        }
        Ok(Self { index, sign })
    }

    pub fn positive(index: u32) -> Self {
        assert!(index >= 1, "generator indices are 1-based");
        Self {
            index,
            sign: Sign::Plus,
        }
    }

    pub fn negative(index: u32) -> Self {
        Self::positive(index).inverse()
    }

    pub fn index(self) -> u32 {
        self.index
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn inverse(self) -> Self {
        Self {
            index: self.index,
            sign: self.sign.flip(),
        }
    }

    pub fn is_inverse_of(self, other: Self) -> bool {
        self.index == other.index && self.sign != other.sign
    }

    /// All 2N letters of rank `rank` in the canonical order.
    pub fn alphabet(rank: u32) -> Vec<GeneratorLabel> {
        (1..=rank)
            .flat_map(|i| [Self::positive(i), Self::negative(i)])
            .collect()
    }
}

impl fmt::Display for GeneratorLabel {
    /// Lowercase letter for a generator, uppercase for its inverse. Ranks above
    /// 26 fall back to `g<i>` / `G<i>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index <= 26 {
            let base = if self.sign == Sign::Plus { b'a' } else { b'A' };
            write!(f, "{}", (base + (self.index - 1) as u8) as char)
        } else {
            let g = if self.sign == Sign::Plus { 'g' } else { 'G' };
            write!(f, "{g}{}", self.index)
        }
    }
}

/// A word over S ∪ S⁻¹, not necessarily reduced.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupWord {
    letters: Vec<GeneratorLabel>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<GeneratorLabel>) -> Self {
        Self { letters }
    }

    pub fn letters(&self) -> &[GeneratorLabel] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: GeneratorLabel) {
        self.letters.push(letter);
    }

    pub fn is_reduced(&self) -> bool {
        self.letters
            .windows(2)
            .all(|w| !w[0].is_inverse_of(w[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        if !self.is_reduced() {
            return false;
        }
        match (self.letters.first(), self.letters.last()) {
            (Some(&first), Some(&last)) if self.letters.len() > 1 => !first.is_inverse_of(last),
            _ => true,
        }
    }

    /// Free reduction (cancel adjacent x x⁻¹ pairs until none remain).
    pub fn reduced(&self) -> GroupWord {
        let mut out: Vec<GeneratorLabel> = Vec::with_capacity(self.letters.len());
        for &x in &self.letters {
            match out.last() {
                Some(&y) if y.is_inverse_of(x) => {
                    out.pop();
                }
                _ => out.push(x),
            }
        }
        GroupWord { letters: out }
    }

    /// Reduces, then strips matching first/last letter pairs.
    pub fn cyclically_reduced(&self) -> GroupWord {
        let r = self.reduced().letters;
        let (mut lo, mut hi) = (0, r.len());
        while hi - lo >= 2 && r[lo].is_inverse_of(r[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        GroupWord {
            letters: r[lo..hi].to_vec(),
        }
    }

    /// Word length |g| of the element represented (length after reduction).
    pub fn word_length(&self) -> usize {
        self.reduced().len()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GroupWord { letters }
    }

    pub fn rotated(&self, k: usize) -> GroupWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        GroupWord { letters }
    }

    pub fn power(&self, k: usize) -> GroupWord {
        GroupWord {
            letters: self.letters.repeat(k),
        }
    }

    /// Largest alphabet index used, 0 for the empty word.
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.index()).max().unwrap_or(0)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let wide = self.letters.iter().any(|l| l.index() > 26);
        for (i, l) in self.letters.iter().enumerate() {
            if wide && i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = GraphError;

    /// Parses the compact notation produced by `Display` for ranks ≤ 26:
    /// `aBba` means a b⁻¹ b a. `1` or the empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(GroupWord::identity());
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            let label = match c {
                'a'..='z' => GeneratorLabel::positive(c as u32 - 'a' as u32 + 1),
                'A'..='Z' => GeneratorLabel::negative(c as u32 - 'A' as u32 + 1),
                _ => {
                    return Err(GraphError::InvalidParameter(format!(
                        "unexpected character {c:?} in word {s:?}"
                    )))
                }
            };
            letters.push(label);
        }
        Ok(GroupWord { letters })
    }
}

/// Conjugacy class of a free-group element, stored as the lexicographically
/// least rotation of a cyclically reduced representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConjugacyClass {
    canonical: GroupWord,
}

impl ConjugacyClass {
    /// Class of an arbitrary word (cyclic reduction is applied first).
    pub fn of(word: &GroupWord) -> Self {
        Self::from_cyclically_reduced(&word.cyclically_reduced())
    }

    /// Class of a word already known to be cyclically reduced.
    pub fn from_cyclically_reduced(word: &GroupWord) -> Self {
        debug_assert!(word.is_cyclically_reduced());
        ConjugacyClass {
            canonical: GroupWord::from_letters(least_rotation(word.letters())),
        }
    }

    pub fn canonical(&self) -> &GroupWord {
        &self.canonical
    }

    /// Conjugacy length ‖γ‖.
    pub fn length(&self) -> usize {
        self.canonical.len()
    }

    /// Length of the primitive root: the least period d of the canonical word
    /// with d | length. Equals `length()` exactly when the class is primitive.
    pub fn root_length(&self) -> usize {
        smallest_period(self.canonical.letters())
    }

    pub fn is_primitive(&self) -> bool {
        !self.canonical.is_empty() && self.root_length() == self.length()
    }
}

impl fmt::Display for ConjugacyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.canonical)
    }
}

/// Lexicographically least rotation, by direct comparison of all rotations.
pub(crate) fn least_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    let n = seq.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best = 0;
    for k in 1..n {
        let candidate = (0..n).map(|i| &seq[(k + i) % n]);
        let current = (0..n).map(|i| &seq[(best + i) % n]);
        if candidate.lt(current) {
            best = k;
        }
    }
    let mut out = seq.to_vec();
    out.rotate_left(best);
    out
}

/// Least d dividing `seq.len()` with `seq` a repetition of its first d items.
pub(crate) fn smallest_period<T: PartialEq>(seq: &[T]) -> usize {
    let n = seq.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (d..n).all(|i| seq[i] == seq[i - d]))
        .unwrap_or(n)
}
