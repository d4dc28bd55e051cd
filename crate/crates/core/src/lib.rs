//! Homotopy and net cohomology of finite partially ordered sets.
//!
//! The crate works with finite posets carrying a causal disjointness
//! relation. It computes the first homotopy group of the simplicial set of a
//! poset, decides path homotopy with replayable witnesses, and implements the
//! category of unitary 1-cocycles over nets of finite-dimensional matrix
//! algebras: path-independence, induced representations, refinement
//! functors, gluing over punctures, and the tensor, symmetry and conjugation
//! structure of superselection sectors.
//!
//! Everything is deterministic. Orders of enumeration, spanning trees and
//! search exploration are fixed so that reports can be compared byte for
//! byte.

pub mod cocycle;
pub mod glue;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod net;
pub mod poset;
pub mod refinement;
pub mod sector;
pub mod spacetime;

pub use cocycle::{Cocycle, Intertwiner};
pub use homotopy::{
    abelianization, apply_deformation, decide_homotopy, path_class, pi1_presentation, Deformation,
    DeformationKind, GroupPresentation, HomotopyVerdict,
};
pub use linalg::{CMat, Tolerances};
pub use net::LocalNet;
pub use poset::{
    compose_paths, reverse_path, Element, Path, Poset, Region, Sieve, Simplex1, Simplex2,
};
