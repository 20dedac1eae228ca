//! Exact computations for rank-2 quadratic pairs on a compact Riemann surface.

pub mod batch;
pub mod chambers;
pub mod cli;
pub mod dimensions;
pub mod exact;
pub mod higgs;
pub mod fixtures;
pub mod jets;
pub mod pairs;
pub mod picard;
pub mod selftest;
pub mod spectral;
