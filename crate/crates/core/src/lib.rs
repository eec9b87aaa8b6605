//! Decides whether a stable curve with involution lies in the indeterminacy
//! locus of the extended Prym map, working purely on its dual graph.
//!
//! The pipeline: [`graph`] parses and validates an equivariant multigraph,
//! [`homology`] builds the anti-invariant lattice X⁻ and types each edge
//! functional, [`dicing`] tests the conditions (*) and (**) through maximal
//! minors, and [`fs_detect`] looks for Friedman–Smith degenerations.
//! [`verify`] enumerates small graphs and cross-checks all of the above.

pub mod dicing;
pub mod error;
pub mod fs_detect;
pub mod graph;
pub mod homology;
pub mod intmat;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{parse_graph, EquivariantGraph};
