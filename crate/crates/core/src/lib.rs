//! Exact computations on finite partially ordered sets.
//!
//! The crate is organised around one question: how large an induced
//! subposet of low order dimension must a poset contain, and how large a
//! one does a given poset actually contain?
//!
//! * [`poset`] — the dense strict-order type and its constructors
//!   (chains, antichains, Boolean lattices, standard examples,
//!   lexicographic products/powers, seeded random orders).
//! * [`invariants`] — height, width, maximum antichains, minimum chain
//!   covers (Dilworth via bipartite matching), and the width-threshold
//!   extraction that guarantees a dimension-bounded subposet of size
//!   sqrt(d * n).
//! * [`dimension`] — realizers, realizer verification, a polynomial
//!   dimension <= 2 decision via transitive orientation of the
//!   incomparability graph, and an exact backtracking search for
//!   dimension <= d.
//! * [`extremal`] — branch-and-bound maximisation of induced subposets
//!   with dimension <= d, plus verification of the lexicographic-power
//!   upper bound on such maxima.
//! * [`bounds`] — closed-form bound arithmetic: the sqrt(d * n) lower
//!   bound, exponent minimisation over standard-example bases, and the
//!   base-2m digit-decomposition upper bound with its smoothed form.
//! * [`format`] — the versioned `poset v1` text format and DOT export
//!   of Hasse diagrams.
//!
//! With the `parallel` feature (default) the extremal search splits the
//! branch tree across a rayon pool; results are identical to the
//! sequential fallback whenever the search runs to exhaustion.

pub mod bits;
pub mod bounds;
pub mod dimension;
pub mod extremal;
pub mod format;
pub mod invariants;
mod matching;
pub mod poset;

pub use poset::{Poset, PosetError, Subset};
