//! Shortest non-zero paths and cycles in group-labeled graphs.
//!
//! A group-labeled graph assigns each edge an element of a group; walking
//! an edge backwards contributes the inverse. This crate finds shortest
//! simple paths whose label avoids a forbidden element (and shortest
//! cycles with non-trivial label) for nonnegative edge lengths, with two
//! interchangeable solvers:
//!
//! * [`solve::Algorithm::Recursive`] repeatedly shrinks a lowest blossom
//!   (a cheapest non-zero cycle hanging off the shortest-path tree) and
//!   recurses on the smaller graph.
//! * [`solve::Algorithm::Fast`] runs a single priority-queue sweep over a
//!   disjoint-set forest and certifies every distance with a feasible
//!   dual solution.
//!
//! Applications built on top: parity-constrained (odd/even) shortest
//! paths, and shortest non-separating cycles of embedded graphs via
//! tree-cotree homology labels. Exhaustive-search oracles back the test
//! suites.

pub mod blossom;
pub mod cycle;
pub mod fast;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod group;
pub mod oracle;
mod prune;
pub mod recursive;
pub mod reductions;
pub mod solve;
pub mod spt;

pub use graph::{EdgeId, LabeledGraph, Length, PathWitness, Step, VertexId, Walk};
pub use group::{GroupDescriptor, GroupElement};
pub use solve::{shortest_nonzero_path, Algorithm, Outcome, PathQueryResult};
