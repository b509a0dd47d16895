//! The upper half-plane model: points, Möbius matrices, distances, Gromov
//! products, translation lengths, and free-group representations.

mod moebius;
mod point;
mod rep;

use thiserror::Error;

pub use moebius::{translation_length, MoebiusMatrix, DET_TOLERANCE};
pub use point::{gromov_product, hyp_distance, HPoint};
pub use rep::{
    load_rep, pair_of_pants_rep, schottky_from_matrices, short_word_sanity_failures, FuchsianRep,
    ENTRY_LIMIT, RENORMALIZE_EVERY,
};

use crate::coding_graph::{GraphPath, GroupWord};

#[derive(Debug, Error)]
pub enum HyperbolicError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numeric range: {0}")]
    NumericRange(String),
    #[error("representation file line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub fn apply(g: &MoebiusMatrix, p: HPoint) -> HPoint {
    g.apply(p)
}

pub fn evaluate_word(rep: &FuchsianRep, w: &GroupWord) -> Result<MoebiusMatrix, HyperbolicError> {
    rep.evaluate_word(w)
}

/// d(z, ev(w)·z).
pub fn displacement(rep: &FuchsianRep, w: &GroupWord) -> Result<f64, HyperbolicError> {
    rep.displacement(w)
}

/// (ev(w)·z, ev(w)⁻¹·z)_z.
pub fn self_gromov(rep: &FuchsianRep, w: &GroupWord) -> Result<f64, HyperbolicError> {
    rep.self_gromov(w)
}

pub fn df_increment(rep: &FuchsianRep, path: &GraphPath<'_>) -> Result<f64, HyperbolicError> {
    rep.df_increment(path)
}
