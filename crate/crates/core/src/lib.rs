//! Distribution of the minimum-weight k-clique (and other fixed subgraphs)
//! in a complete graph with i.i.d. random edge weights.
//!
//! The crate provides:
//!
//! - explicit lower/upper bounds on the CDF of the minimum weight W, from a
//!   Poisson approximation with computable error terms (`cliques`,
//!   `subgraphs`),
//! - asymptotic CDF and mean formulas for strictly balanced subgraphs
//!   (`subgraphs`),
//! - an exact minimum-weight solver (`solver`) and a reproducible
//!   Monte-Carlo harness (`montecarlo`) that validate the bounds,
//! - significance tests for observed minimum weights against the i.i.d.
//!   null hypothesis.

pub mod cliques;
pub mod error;
pub mod montecarlo;
pub mod numerics;
pub mod solver;
pub mod subgraphs;
pub mod weights;

pub use error::{Error, Result};
