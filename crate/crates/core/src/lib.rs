//! Random walk with jumps on weighted undirected graphs.
//!
//! The walk moves along `A + (alpha/n) 1 1^T`: with probability
//! `alpha / (d_i + alpha)` it jumps to a uniformly random vertex. This crate
//! computes its spectrum and relaxation time, decides whether a small jump
//! rate shortens the relaxation time, evaluates the degree-based sufficient
//! conditions for that, and scans graph catalogs for counterexamples.

pub mod analysis;
pub mod conditions;
pub mod error;
pub mod format;
pub mod graph;
pub mod linalg;
pub mod perturbation;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
