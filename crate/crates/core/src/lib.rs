// SPDX-License-Identifier: Apache-2.0

//! Local Reed-type list coloring toolkit.
//!
//! The crate implements the local naive random coloring procedure with
//! activation and equalizing coin flips, the savings random variables it is
//! analysed with, a constructive coloring of complete graphs minus a
//! matching, density audits for list-critical graphs, closed-form evaluators
//! for the associated bounds, and the dense-subgraph extraction used for
//! critical-graph density results. Exact oracles (backtracking colorability,
//! choosability, clique search, maximum matching, maximum average degree)
//! back every randomized or asymptotic claim with something checkable.

pub mod bipartite;
pub mod blossom;
pub mod bounds;
pub mod correspondence;
pub mod enumerate;
pub mod experiment;
pub mod extraction;
pub mod flow;
pub mod fraction;
pub mod generators;
pub mod graph;
pub mod io;
pub mod knm;
pub mod lists;
pub mod oracle;
pub mod procedure;

pub use correspondence::{CorrespondenceAssignment, ResidualAssignment};
pub use fraction::Fraction;
pub use graph::{Graph, GraphError, Matching};
pub use lists::{Coloring, ListAssignment, VertexProfile};
