//! Algebraic toolkit for synchronizing automata.
//!
//! The crate follows one pipeline: an [`Automaton`] generates its transition
//! monoid, which is represented by integer matrices on the hyperplane orthogonal
//! to the all-ones vector. The span of those matrices is a finite-dimensional
//! algebra; its radical decides semisimplicity, and the simple components of the
//! semisimple quotient drive supports, minimal sections, cores and the packing
//! argument that bounds reset words by `(n−1)·D(2, r, n)`.
//!
//! Module map:
//! - [`automaton`]: data model, word actions, subset searches, generators.
//! - [`congruence`]: partitions, congruence closure, quotients.
//! - [`linalg`]: exact rational matrices and subspaces.
//! - [`algebra`]: monoid, representation, radical, quotient, Wedderburn split.
//! - [`ideal`]: factor monoids, 0-minimal ideals, sections, cores, σ-classes, synthesis.
//! - [`packing`]: packing numbers and their bounds.
//! - [`census`]: isomorph-free enumeration of small automata.

pub mod algebra;
pub mod automaton;
pub mod census;
pub mod congruence;
pub mod error;
pub mod ideal;
pub mod linalg;
pub mod packing;

pub use algebra::{AlgebraicStructure, PipelineConfig, Tolerances, WedderburnData};
pub use automaton::{Automaton, StateSet, Transformation, Word};
pub use congruence::Partition;
pub use error::{Error, Result};
