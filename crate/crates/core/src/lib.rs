//! Core algorithms for deciding whether a graph embeds topologically into a
//! two-dimensional simplicial complex.
//!
//! The crate is `no_std` (with `alloc`): everything here is pure combinatorics
//! on owned data structures. File formats, the command line, and parallel
//! drivers live in the companion `twoplex` crate.
//!
//! The main entry points are:
//!
//! * [`graph`] — multigraphs, branch decompositions, planarity;
//! * [`simplicial`] / [`surface`] — simplicial 2-complexes and their
//!   homeomorphism-level ("topological") representation;
//! * [`map`] — combinatorial maps of graphs properly embedded on a complex,
//!   canonical forms, and exhaustive enumeration of small embeddings;
//! * [`reductions`] — preprocessing, surface cutting, and the reduction to
//!   proper cellular embeddings;
//! * [`dp`] — the exhaustive-list dynamic program over a rooted branch
//!   decomposition and the assembled decision procedure;
//! * [`oracle`] — independent brute-force ground truth for small instances.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod budget;
pub mod branchdecomp;
pub mod dp;
pub mod graph;
pub mod homeo;
pub mod map;
pub mod oracle;
pub mod partition;
pub mod planar;
#[cfg(test)]
mod partition_tests;
pub mod reductions;
pub mod rotation;
pub mod simplicial;
pub mod surface;

pub use budget::{Budget, CapError};
pub use graph::Graph;

