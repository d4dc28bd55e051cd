//! Homotopy of paths and the first homotopy group.
//!
//! Paths are deformed by elementary ampliations and contractions along
//! 2-simplices. The fundamental group at a basepoint is presented with one
//! generator per 1-simplex (up to reversal), spanning-tree edges set to the
//! identity, and one relator per 2-simplex in a generating set.

mod abelian;
mod decide;
mod deform;
pub(crate) mod presentation;
mod tietze;
mod word;

pub use abelian::{abelianize, Abelianization};
pub use decide::{
    decide_homotopy, Certificate, HomotopyDecider, HomotopyError, HomotopyVerdict, DEFAULT_DEPTH,
};
pub use deform::{
    apply_deformation, normalize, replay, Deformation, DeformationError, DeformationKind,
};
pub use presentation::{
    generating_simplices2, pi1_presentation, pi1_presentation_with, GroupPresentation,
    PresentationError, RelationMode,
};
pub use tietze::{simplify, GroupShape, NormalForm, Simplified};
pub use word::{generator_of, letter, Letter, Word};

use crate::poset::Path;

/// Abelianization of a presented group.
pub fn abelianization(g: &GroupPresentation) -> Abelianization {
    abelianize(g.num_generators(), &g.relations)
}

/// Tietze simplification with the default budget of ten moves per
/// generator.
pub fn simplify_presentation(g: &GroupPresentation) -> Simplified {
    simplify(g.num_generators(), &g.relations, 10 * g.num_generators())
}

/// The word of a path: letters of its simplices in matrix order with
/// spanning-tree and other trivial generators erased, freely reduced. An
/// open path stands for the based loop obtained by attaching tree paths at
/// both ends.
pub fn path_class(g: &GroupPresentation, p: &Path) -> Result<Word, PresentationError> {
    g.path_word(p)
}
