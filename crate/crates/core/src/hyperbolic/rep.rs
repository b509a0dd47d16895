use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::moebius::{
    displacement_from_i, displacement_of_square_from_i, tau_defect_from_i, translation_length,
    MoebiusMatrix,
    DET_TOLERANCE,
};
use super::point::HPoint;
use super::HyperbolicError;
use crate::coding_graph::{GeneratorLabel, GraphPath, GroupWord, Sign};

/// Matrix entries above this magnitude abort word evaluation.
pub const ENTRY_LIMIT: f64 = 1e300;

/// Products between determinant renormalizations.
pub const RENORMALIZE_EVERY: usize = 32;

/// Renormalization is skipped once |ad| + |bc| exceeds this, because the
/// computed determinant no longer carries information at that size.
const RESOLVABLE_DET_SCALE: f64 = 1e6;

/// A representation of the free group F_N into PSL(2, ℝ) together with a
/// basepoint z of the upper half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianRep {
    /// images[i] = [ρ(a_{i+1}), ρ(a_{i+1})⁻¹]
    images: Vec<[MoebiusMatrix; 2]>,
    basepoint: HPoint,
    /// P with P·i = z; displacement at z is displacement at i of P⁻¹gP.
    to_base: MoebiusMatrix,
    from_base: MoebiusMatrix,
}

impl FuchsianRep {
    /// Normalizes each generator to determinant one and stores its inverse.
    pub fn new(generators: Vec<MoebiusMatrix>, basepoint: HPoint) -> Result<Self, HyperbolicError> {
        if generators.is_empty() {
            return Err(HyperbolicError::InvalidArgument(
                "representation needs at least one generator".into(),
            ));
        }
        let mut images = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            let entries = [g.a, g.b, g.c, g.d];
            if entries.iter().any(|e| !e.is_finite()) || g.det().is_nan() || g.det() <= 0.0 {
                return Err(HyperbolicError::InvalidArgument(format!(
                    "generator {} must be finite with positive determinant",
                    i + 1
                )));
            }
            // Already-unimodular input is kept bit-for-bit so files round-trip.
            let g = if (g.det() - 1.0).abs() > 1e-14 { g.normalized() } else { *g };
            images.push([g, g.adjugate()]);
        }
        let sy = basepoint.y.sqrt();
        let to_base = MoebiusMatrix::new(sy, basepoint.x / sy, 0.0, 1.0 / sy);
        Ok(Self {
            images,
            basepoint,
            to_base,
            from_base: to_base.adjugate(),
        })
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn basepoint(&self) -> HPoint {
        self.basepoint
    }

    pub fn with_basepoint(&self, basepoint: HPoint) -> Self {
        let generators = self.generators();
        Self::new(generators, basepoint).expect("generators already validated")
    }

    pub fn generators(&self) -> Vec<MoebiusMatrix> {
        self.images.iter().map(|pair| pair[0]).collect()
    }

    pub fn image(&self, label: GeneratorLabel) -> Result<MoebiusMatrix, HyperbolicError> {
        let pair = self
            .images
            .get(label.index() as usize - 1)
            .ok_or_else(|| {
                HyperbolicError::InvalidArgument(format!(
                    "letter {label} outside a rank-{} representation",
                    self.rank()
                ))
            })?;
        Ok(match label.sign() {
            Sign::Plus => pair[0],
            Sign::Minus => pair[1],
        })
    }

    /// Largest generator displacement max_s d(z, s·z).
    pub fn max_generator_displacement(&self) -> f64 {
        self.images
            .iter()
            .flatten()
            .map(|g| self.displacement_of(g))
            .fold(0.0, f64::max)
    }

    /// Left-to-right product of generator images over the freely reduced
    /// word, so that cancelling letters never build up large intermediates.
    pub fn evaluate_word(&self, word: &GroupWord) -> Result<MoebiusMatrix, HyperbolicError> {
        let reduced;
        let word = if word.is_reduced() {
            word
        } else {
            reduced = word.reduced();
            &reduced
        };
        let mut acc = MoebiusMatrix::IDENTITY;
        for (k, &letter) in word.letters().iter().enumerate() {
            acc = acc * self.image(letter)?;
            if (k + 1) % RENORMALIZE_EVERY == 0 {
                let scale = (acc.a * acc.d).abs() + (acc.b * acc.c).abs();
                if scale < RESOLVABLE_DET_SCALE {
                    acc = acc.normalized();
                }
            }
            if acc.max_abs_entry() > ENTRY_LIMIT || !acc.max_abs_entry().is_finite() {
                return Err(HyperbolicError::NumericRange(format!(
                    "matrix entries passed {ENTRY_LIMIT:e} after {} of {} letters; use shorter words",
                    k + 1,
                    word.len()
                )));
            }
        }
        Ok(acc)
    }

    /// P⁻¹ g P, the conjugate that moves the basepoint to i.
    fn based(&self, g: &MoebiusMatrix) -> MoebiusMatrix {
        self.from_base * *g * self.to_base
    }

    /// d(z, g·z).
    pub fn displacement_of(&self, g: &MoebiusMatrix) -> f64 {
        displacement_from_i(&self.based(g))
    }

    /// (g·z, g⁻¹·z)_z = d(z, gz) − ½ d(z, g²z), since d(gz, g⁻¹z) = d(z, g²z).
    pub fn self_gromov_of(&self, g: &MoebiusMatrix) -> f64 {
        let h = self.based(g);
        (displacement_from_i(&h) - 0.5 * displacement_of_square_from_i(&h)).max(0.0)
    }

    /// |τ(g) − d(z, gz) + 2(gz, g⁻¹z)_z|, evaluated without cancellation.
    pub fn tau_residual_of(&self, g: &MoebiusMatrix) -> f64 {
        tau_defect_from_i(&self.based(g)).abs()
    }

    pub fn displacement(&self, word: &GroupWord) -> Result<f64, HyperbolicError> {
        Ok(self.displacement_of(&self.evaluate_word(word)?))
    }

    pub fn self_gromov(&self, word: &GroupWord) -> Result<f64, HyperbolicError> {
        Ok(self.self_gromov_of(&self.evaluate_word(word)?))
    }

    pub fn translation_length(&self, word: &GroupWord) -> Result<f64, HyperbolicError> {
        Ok(translation_length(&self.evaluate_word(word)?))
    }

    /// DF(x) = d(z, ev(x)z) − d(z, ev(Tx)z).
    pub fn df_increment(&self, path: &GraphPath<'_>) -> Result<f64, HyperbolicError> {
        if path.is_empty() {
            return Err(HyperbolicError::InvalidArgument(
                "DF needs a path of length at least 1".into(),
            ));
        }
        let word = path.labels();
        let tail = GroupWord::from_letters(word.letters()[1..].to_vec());
        Ok(self.displacement(&word)? - self.displacement(&tail)?)
    }

    /// Serializes to the representation file format with 17 significant
    /// digits per number.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "generators {}", self.rank()).unwrap();
        for [g, _] in &self.images {
            writeln!(s, "matrix {:.16e} {:.16e} {:.16e} {:.16e}", g.a, g.b, g.c, g.d).unwrap();
        }
        writeln!(s, "basepoint {:.16e} {:.16e}", self.basepoint.x, self.basepoint.y).unwrap();
        s
    }

    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_file_string().as_bytes()))
    }
}

/// Parses the representation file format:
///
/// ```text
/// generators 2
/// matrix a b c d
/// matrix a b c d
/// basepoint x y
/// ```
///
/// `#` starts a comment. The basepoint line is optional and defaults to i.
pub fn load_rep(content: &str) -> Result<FuchsianRep, HyperbolicError> {
    let mut count: Option<usize> = None;
    let mut mats = Vec::new();
    let mut basepoint = HPoint::i();
    for (lineno, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| HyperbolicError::Parse {
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let numbers = |expected: usize| -> Result<Vec<f64>, HyperbolicError> {
            if fields.len() != expected + 1 {
                return Err(err(format!(
                    "`{}` takes {expected} numbers",
                    fields[0]
                )));
            }
            fields[1..]
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| err(format!("bad number {f:?}: {e}"))))
                .collect()
        };
        match fields[0] {
            "generators" => {
                if fields.len() != 2 {
                    return Err(err("expected `generators <count>`".into()));
                }
                count = Some(
                    fields[1]
                        .parse()
                        .map_err(|e| err(format!("bad generator count: {e}")))?,
                );
            }
            "matrix" => {
                let v = numbers(4)?;
                mats.push(MoebiusMatrix::new(v[0], v[1], v[2], v[3]));
            }
            "basepoint" => {
                let v = numbers(2)?;
                basepoint = HPoint::new(v[0], v[1]).map_err(|e| err(e.to_string()))?;
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    let count = count.ok_or(HyperbolicError::Parse {
        line: 0,
        message: "missing `generators` header".into(),
    })?;
    if count != mats.len() {
        return Err(HyperbolicError::Parse {
            line: 0,
            message: format!("header declares {count} generators, found {}", mats.len()),
        });
    }
    for (i, m) in mats.iter().enumerate() {
        if (m.det() - 1.0).abs() > DET_TOLERANCE {
            return Err(HyperbolicError::InvalidArgument(format!(
                "generator {} has determinant {}, expected 1",
                i + 1,
                m.det()
            )));
        }
    }
    FuchsianRep::new(mats, basepoint)
}

/// Rank-2 representation of a pair of pants with boundary lengths l1, l2, l3:
/// τ(A) = l1, τ(B) = l2, τ((AB)⁻¹) = l3.
///
/// A = [[ch₁, sh₁], [sh₁, ch₁]] and B = [[ch₂, t·sh₂], [sh₂/t, ch₂]] (half-length
/// hyperbolic functions), where t is the root in (−1, 0) of
/// t + 1/t = −(2ch₃ + 2ch₁ch₂)/(sh₁sh₂), which forces tr(AB) = −2ch₃.
pub fn pair_of_pants_rep(
    l1: f64,
    l2: f64,
    l3: f64,
    basepoint: HPoint,
) -> Result<FuchsianRep, HyperbolicError> {
    for (name, l) in [("l1", l1), ("l2", l2), ("l3", l3)] {
        if l.is_nan() || l <= 0.0 || !l.is_finite() {
            return Err(HyperbolicError::InvalidArgument(format!(
                "boundary length {name} must be positive, got {l}"
            )));
        }
    }
    let (ch1, sh1) = ((l1 / 2.0).cosh(), (l1 / 2.0).sinh());
    let (ch2, sh2) = ((l2 / 2.0).cosh(), (l2 / 2.0).sinh());
    let ch3 = (l3 / 2.0).cosh();
    let k = (2.0 * ch3 + 2.0 * ch1 * ch2) / (sh1 * sh2);
    let t = (-k + (k * k - 4.0).sqrt()) / 2.0;
    let a = MoebiusMatrix::new(ch1, sh1, sh1, ch1);
    let b = MoebiusMatrix::new(ch2, t * sh2, sh2 / t, ch2);
    FuchsianRep::new(vec![a, b], basepoint)
}

/// Representation generated by the given hyperbolic matrices. Logs a warning
/// (without rejecting) when a cyclically reduced word of length ≤ 4 fails to
/// be hyperbolic.
pub fn schottky_from_matrices(
    mats: Vec<MoebiusMatrix>,
    basepoint: HPoint,
) -> Result<FuchsianRep, HyperbolicError> {
    if mats.len() < 2 {
        return Err(HyperbolicError::InvalidArgument(format!(
            "a Schottky representation needs rank at least 2, got {}",
            mats.len()
        )));
    }
    for (i, m) in mats.iter().enumerate() {
        if !m.normalized().is_hyperbolic() {
            return Err(HyperbolicError::InvalidArgument(format!(
                "generator {} is not hyperbolic (|tr| = {})",
                i + 1,
                m.normalized().trace().abs()
            )));
        }
    }
    let rep = FuchsianRep::new(mats, basepoint)?;
    let failures = short_word_sanity_failures(&rep, 4);
    if !failures.is_empty() {
        log::warn!(
            "{} cyclically reduced words of length <= 4 are not hyperbolic (first: {}); \
             the representation may not be discrete and free",
            failures.len(),
            failures[0]
        );
    }
    Ok(rep)
}

/// Cyclically reduced words of length 1..=`max_len` whose image has |tr| ≤ 2.
pub fn short_word_sanity_failures(rep: &FuchsianRep, max_len: usize) -> Vec<GroupWord> {
    let alphabet = GeneratorLabel::alphabet(rep.rank() as u32);
    let mut failures = Vec::new();
    let mut frontier = vec![GroupWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &alphabet {
                if w.letters().last().is_some_and(|&x| x.is_inverse_of(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        for w in next.iter().filter(|w| w.is_cyclically_reduced()) {
            match rep.evaluate_word(w) {
                Ok(g) if g.is_hyperbolic() => {}
                _ => failures.push(w.clone()),
            }
        }
        frontier = next;
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    #[test]
    fn pants_boundary_lengths() {
        let rep = pair_of_pants_rep(2.0, 2.0, 2.0, HPoint::i()).unwrap();
        for word in ["a", "b", "BA", "ab"] {
            let tau = rep.translation_length(&w(word)).unwrap();
            assert!((tau - 2.0).abs() < 1e-8, "{word}: {tau}");
        }
        let rep = pair_of_pants_rep(1.0, 2.5, 3.5, HPoint::i()).unwrap();
        assert!((rep.translation_length(&w("a")).unwrap() - 1.0).abs() < 1e-8);
        assert!((rep.translation_length(&w("b")).unwrap() - 2.5).abs() < 1e-8);
        assert!((rep.translation_length(&w("BA")).unwrap() - 3.5).abs() < 1e-8);
    }

    #[test]
    fn pants_trace_of_product() {
        for (l1, l2, l3) in [(2.0, 2.0, 2.0), (0.5, 1.5, 4.0)] {
            let rep = pair_of_pants_rep(l1, l2, l3, HPoint::i()).unwrap();
            let ab = rep.evaluate_word(&w("ab")).unwrap();
            assert!((ab.trace().abs() - 2.0 * (l3 / 2.0f64).cosh()).abs() < 1e-8);
            assert!(ab.trace() < 0.0);
        }
    }

    #[test]
    fn pants_rejects_nonpositive_lengths() {
        assert!(pair_of_pants_rep(0.0, 1.0, 1.0, HPoint::i()).is_err());
        assert!(pair_of_pants_rep(1.0, -1.0, 1.0, HPoint::i()).is_err());
    }

    #[test]
    fn inverse_images_multiply_to_identity() {
        let rep = pair_of_pants_rep(1.0, 2.0, 3.0, HPoint::new(0.2, 0.8).unwrap()).unwrap();
        for l in GeneratorLabel::alphabet(2) {
            let prod = rep.image(l.inverse()).unwrap() * rep.image(l).unwrap();
            assert!(prod.relative_distance(&MoebiusMatrix::IDENTITY) < 1e-9);
        }
    }

    #[test]
    fn empty_word_and_cancellation() {
        let rep = pair_of_pants_rep(2.0, 2.0, 2.0, HPoint::i()).unwrap();
        assert_eq!(rep.evaluate_word(&GroupWord::identity()).unwrap(), MoebiusMatrix::IDENTITY);
        assert_eq!(rep.displacement(&GroupWord::identity()).unwrap(), 0.0);
        assert_eq!(rep.self_gromov(&GroupWord::identity()).unwrap(), 0.0);
        let g = rep.evaluate_word(&w("bB")).unwrap();
        assert!(g.relative_distance(&MoebiusMatrix::IDENTITY) < 1e-9);
        assert!(rep.evaluate_word(&w("c")).is_err());
    }

    #[test]
    fn inverse_words_have_equal_displacement() {
        let rep = pair_of_pants_rep(1.0, 2.0, 3.0, HPoint::new(0.3, 1.4).unwrap()).unwrap();
        let word = w("abbAbaB");
        let d1 = rep.displacement(&word).unwrap();
        let d2 = rep.displacement(&word.inverse()).unwrap();
        assert!((d1 - d2).abs() < 1e-9);
    }

    #[test]
    fn overflow_guard() {
        let rep = pair_of_pants_rep(20.0, 20.0, 20.0, HPoint::i()).unwrap();
        let long = w("a").power(80);
        match rep.evaluate_word(&long) {
            Err(HyperbolicError::NumericRange(msg)) => assert!(msg.contains("shorter")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn file_round_trip_is_exact() {
        let rep = pair_of_pants_rep(1.3, 2.7, 0.9, HPoint::new(-0.25, 1.75).unwrap()).unwrap();
        let text = rep.to_file_string();
        let back = load_rep(&text).unwrap();
        assert_eq!(back, rep);
        assert_eq!(back.to_file_string(), text);
    }

    #[test]
    fn file_errors() {
        assert!(matches!(
            load_rep("generators 2\nmatrix 1 0 0 1\n"),
            Err(HyperbolicError::Parse { .. })
        ));
        assert!(matches!(
            load_rep("generators 1\nmatrix 1 0 0 x\n"),
            Err(HyperbolicError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            load_rep("generators 1\nmatrix 2 0 0 1\n"),
            Err(HyperbolicError::InvalidArgument(_))
        ));
    }

    #[test]
    fn schottky_argument_checks() {
        let h = MoebiusMatrix::axis_translation(2.0);
        assert!(schottky_from_matrices(vec![h], HPoint::i()).is_err());
        let rot = MoebiusMatrix::new(0.5f64.cos(), -(0.5f64.sin()), 0.5f64.sin(), 0.5f64.cos());
        assert!(schottky_from_matrices(vec![h, rot], HPoint::i()).is_err());
    }

    #[test]
    fn separated_axes_pass_sanity_check() {
        // Axis of A joins −1 and 1, axis of B joins 2 and 4; isometric circles
        // are disjoint for translation length 4.
        let a = MoebiusMatrix::new(2f64.cosh(), 2f64.sinh(), 2f64.sinh(), 2f64.cosh());
        let shift = MoebiusMatrix::horizontal_shift(3.0);
        let b = shift * a * shift.adjugate();
        let rep = schottky_from_matrices(vec![a, b], HPoint::i()).unwrap();
        assert!(short_word_sanity_failures(&rep, 4).is_empty());
    }

    #[test]
    fn shared_fixed_point_pair_fails_sanity_check() {
        // diag(2, 1/2) and its conjugate by z ↦ z + 3 both fix ∞, so A·B⁻¹ is
        // parabolic.
        let a = MoebiusMatrix::new(2.0, 0.0, 0.0, 0.5);
        let shift = MoebiusMatrix::horizontal_shift(3.0);
        let b = shift * a * shift.adjugate();
        let rep = schottky_from_matrices(vec![a, b], HPoint::i()).unwrap();
        let failures = short_word_sanity_failures(&rep, 4);
        assert!(failures.contains(&w("aB")));
    }
}
