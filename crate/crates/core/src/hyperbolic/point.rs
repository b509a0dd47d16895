use serde::{Deserialize, Serialize};

use super::HyperbolicError;

/// A point x + iy of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, HyperbolicError> {
        if y.is_nan() || y <= 0.0 || !x.is_finite() || !y.is_finite() {
            return Err(HyperbolicError::InvalidArgument(format!(
                "({x}, {y}) is not in the upper half-plane"
            )));
        }
        Ok(Self { x, y })
    }

    /// The point i.
    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }
}

impl Default for HPoint {
    fn default() -> Self {
        Self::i()
    }
}

/// Hyperbolic distance, arccosh(1 + |p−q|²/(2 p_y q_y)), evaluated as
/// 2·asinh(|p−q| / (2√(p_y q_y))) which stays accurate near 0 and for points
/// close to the boundary.
pub fn hyp_distance(p: HPoint, q: HPoint) -> f64 {
    let chord = (p.x - q.x).hypot(p.y - q.y);
    2.0 * (chord / (2.0 * p.y.sqrt() * q.y.sqrt())).asinh()
}

/// (x, y)_base = ½(d(x, base) + d(y, base) − d(x, y)), clamped at 0 against
/// rounding.
pub fn gromov_product(x: HPoint, y: HPoint, base: HPoint) -> f64 {
    (0.5 * (hyp_distance(x, base) + hyp_distance(y, base) - hyp_distance(x, y))).max(0.0)
}
