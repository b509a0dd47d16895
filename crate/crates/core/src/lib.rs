//! Exact combinatorics and Monte Carlo experiments for the length statistics
//! of random closed geodesics on hyperbolic surfaces with free fundamental
//! group.
//!
//! The pipeline: a [`coding_graph`] whose closed paths code conjugacy classes,
//! the Parry Markov chain and an exactly uniform closed-path sampler in
//! [`parry_markov`], the Möbius action on the upper half-plane in
//! [`hyperbolic`], and the statistical checks in [`experiments`].

pub mod cli;
pub mod coding_graph;
pub mod experiments;
pub mod hyperbolic;
pub mod intmat;
pub mod parry_markov;
