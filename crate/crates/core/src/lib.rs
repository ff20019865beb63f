//! Combinatorial calculus of circular handle decompositions of knot
//! exteriors.
//!
//! Level surfaces are tracked as multisets of `(genus, boundary)` pairs
//! ([`surface`]); a decomposition is a cyclic sequence of thin and thick
//! level surfaces ([`decomposition`]) whose circular width is the multiset of
//! thick-surface complexities. [`rewrites`] implements width-decreasing
//! moves and a bounded search over them, [`knot_ops`] the decompositions
//! induced by connected sum and boundary sum, and [`knot_table`] builds the
//! fibered and handle-number-one forms from catalogued knot data.

pub mod decomposition;
pub mod format;
pub mod knot_ops;
pub mod knot_table;
pub mod rewrites;
pub mod surface;

pub use decomposition::{
    compare_width, transition_realizable, CircularDecomposition, DecompositionError, HandleKind,
    Mode, MorseStats, ValidationReport, WidthMultiset,
};
pub use surface::{OneHandleMove, SurfaceClass, SurfaceComponent, SurfaceError, TwoHandleMove};
