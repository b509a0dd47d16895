use std::ops::Mul;

use twofloat::TwoFloat;

use serde::{Deserialize, Serialize};

use super::point::HPoint;

/// Tolerance on |det − 1| for matrices accepted as isometries.
pub const DET_TOLERANCE: f64 = 1e-9;

/// A real 2×2 matrix [[a, b], [c, d]] acting by z ↦ (az + b)/(cz + d).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MoebiusMatrix {
    pub const IDENTITY: MoebiusMatrix = MoebiusMatrix {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// diag(e^{t/2}, e^{−t/2}), translation by t along the imaginary axis.
    pub fn axis_translation(t: f64) -> Self {
        Self::new((t / 2.0).exp(), 0.0, 0.0, (-t / 2.0).exp())
    }

    /// z ↦ z + s.
    pub fn horizontal_shift(s: f64) -> Self {
        Self::new(1.0, s, 0.0, 1.0)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    /// Divides by √det so the determinant becomes 1. Orientation-reversing
    /// input (det ≤ 0) is returned unchanged.
    pub fn normalized(&self) -> Self {
        let det = self.det();
        if det > 0.0 {
            self.scaled(1.0 / det.sqrt())
        } else {
            *self
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Adjugate [[d, −b], [−c, a]] divided by the determinant.
    pub fn inverse(&self) -> Self {
        let det = self.det();
        Self::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    /// Adjugate only; the exact inverse of a determinant-one matrix.
    pub fn adjugate(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0
    }

    /// The determinant when it is numerically resolvable, else 1. Products
    /// of determinant-one matrices with large entries lose ad − bc to
    /// cancellation; those are taken at their nominal determinant.
    pub fn effective_det(&self) -> f64 {
        let det = self.det();
        let scale = (self.a * self.d).abs() + (self.b * self.c).abs();
        if scale <= 1e6 * det.abs() {
            det
        } else {
            1.0
        }
    }

    /// Image of `p` under z ↦ (az + b)/(cz + d), evaluated in double-double
    /// so that points pushed close to the boundary keep their separation.
    pub fn apply(&self, p: HPoint) -> HPoint {
        let (x, y) = (TwoFloat::from(p.x), TwoFloat::from(p.y));
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let den_re = x * c + d;
        let den_im = y * c;
        let num_re = x * a + b;
        let num_im = y * a;
        let norm = den_re * den_re + den_im * den_im;
        HPoint {
            x: f64::from((num_re * den_re + num_im * den_im) / norm),
            y: f64::from(y * self.effective_det() / norm),
        }
    }

    /// max over entries of |self − other| / max(1, |other|).
    pub fn relative_distance(&self, other: &MoebiusMatrix) -> f64 {
        let scale = other.max_abs_entry().max(1.0);
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .map(|e| e.abs() / scale)
        .fold(0.0, f64::max)
    }
}

impl Mul for MoebiusMatrix {
    type Output = MoebiusMatrix;

    fn mul(self, r: MoebiusMatrix) -> MoebiusMatrix {
        MoebiusMatrix::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

/// Stable translation length: 2·arccosh(|tr g|/2) for hyperbolic g, and 0
/// when |tr g| ≤ 2 (elliptic or parabolic).
pub fn translation_length(g: &MoebiusMatrix) -> f64 {
    let t = g.trace().abs();
    if t > 2.0 {
        2.0 * (t / 2.0).acosh()
    } else {
        0.0
    }
}

/// d(i, h·i) for a determinant-one matrix h, from
/// 2 sinh(d/2) = √((a−d)² + (b+c)²). Safe for entries up to f64 range.
pub(crate) fn displacement_from_i(h: &MoebiusMatrix) -> f64 {
    2.0 * ((h.a - h.d).hypot(h.b + h.c) / 2.0).asinh()
}

/// d(i, h²·i) without forming h² in unscaled arithmetic: h is divided by its
/// largest entry first and the scale is reapplied in log space.
pub(crate) fn displacement_of_square_from_i(h: &MoebiusMatrix) -> f64 {
    let m = h.max_abs_entry();
    if m == 0.0 {
        return 0.0;
    }
    let unit = h.scaled(1.0 / m);
    let sq = unit * unit;
    let y = (sq.a - sq.d).hypot(sq.b + sq.c);
    if y == 0.0 {
        return 0.0;
    }
    // d = 2 asinh(m² y / 2)
    let log_x = 2.0 * m.ln() + y.ln() - std::f64::consts::LN_2;
    if log_x < 20.0 {
        2.0 * log_x.exp().asinh()
    } else {
        // asinh(x) = ln(2x) + O(x⁻²)
        2.0 * (log_x + std::f64::consts::LN_2)
    }
}

/// τ(h) + d(i, h·i) − d(i, h²·i) for a determinant-one hyperbolic h, without
/// the cancellation of the direct three-term sum.
///
/// With c = |tr h|/2 and s = sinh(d(i, hi)/2), Cayley–Hamilton gives
/// sinh(d(i, h²i)/2) = 2c·s. Writing each distance as 2 ln(2x) plus a small
/// correction, the logarithms cancel exactly and the residual is
/// 2(g(c) + f(s) − f(2cs)) with f(s) = ln((1 + √(1 + s⁻²))/2) and
/// g(c) = ln((1 + √(1 − c⁻²))/2). Non-hyperbolic input falls back to the
/// direct sum.
pub(crate) fn tau_defect_from_i(h: &MoebiusMatrix) -> f64 {
    let c = h.trace().abs() / 2.0;
    let x = (h.a - h.d).hypot(h.b + h.c);
    if c <= 1.0 || x == 0.0 {
        return translation_length(h) + displacement_from_i(h) - displacement_of_square_from_i(h);
    }
    // u = s⁻², w = c⁻²
    let u = (2.0 / x).powi(2);
    let w = (1.0 / c).powi(2);
    let f = |u: f64| (u / (2.0 * ((1.0 + u).sqrt() + 1.0))).ln_1p();
    let g = (-w / (2.0 * (1.0 + (1.0 - w).sqrt()))).ln_1p();
    2.0 * (g + f(u) - f(u * w / 4.0))
}
