//! Generalized Turán numbers `Ex(n, H, T)` for a forbidden tree `T`.
//!
//! The crate computes the growth exponent `r(H, T)` from blow-ups of `H`,
//! builds the matching extremal constructions, brute-forces exact values at
//! small `n`, and runs the upper-bound machinery (rainbow partition, ordered
//! refinement of copy families, red/blue digraph, inductive tree embedding)
//! on concrete graphs.

pub mod error;
pub mod graph;
pub mod subgraph;
pub mod blowup;
pub mod bigstr;
pub mod lab;
pub mod proof;

pub use error::{Error, Result};
pub use graph::{Graph, GraphFormat};
