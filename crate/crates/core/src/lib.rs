//! Higher-dimensional automata (HDA) models of shared-variable concurrent
//! programs.
//!
//! The library is organized in layers:
//!
//! - [`pcs`] — precubical-set combinatorics: graded cell storage, face
//!   operators, intervals, standard cubes, tensor products, truncation,
//!   paths, and 1-skeleton characteristic maps of cubes.
//! - [`hda`] — the labeling layer: HDAs, structural predicates
//!   (extensional, deterministic), tensor product and coproduct of HDAs,
//!   and morphism checking.
//! - [`lts`] — transition systems with a relation on labels, independence
//!   squares, the square-filling functor `psi` and the relation-extraction
//!   functor `phi`, interleaving, and coproducts.
//! - [`model`] — the HDA-model construction by iterative cube filling,
//!   HM1–HM4 verification, a brute-force coskeleton oracle, morphism
//!   extension, canonical isomorphisms, and unique-cube lookup.
//! - [`progg`] — program graphs over finitely-valued shared variables:
//!   guard/action evaluation, state-graph construction, the transition
//!   system model with process-ID relation, parallel composition, and the
//!   interleaving isomorphism.
//! - [`format`] — JSON file formats and DOT export.
//! - [`cli`] — the batch command-line frontend.
//!
//! All structures are immutable after construction and safe to share
//! read-only across threads.

pub mod cli;
pub mod format;
pub mod hda;
pub mod lts;
pub mod model;
pub mod pcs;
pub mod progg;
