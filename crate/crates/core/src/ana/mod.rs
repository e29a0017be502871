//! The bicategory of anafunctors: covers with functors out of the base
//! change, transformations between them, and their compositions.

mod anafunctor;
mod bicategory;
mod pseudo;
mod transformation;

pub use anafunctor::{alpha_transformation, compose_ana, induced_functor, Anafunctor};
pub use bicategory::{
    associator, check_associator_naturality, check_interchange, check_pentagon, check_unit_strictness,
    check_vcomp_associative, corrupted_associator, corrupted_vcomp, AssociatorFn, VcompFn,
};
pub use pseudo::{is_isomorphic_to_functor, pseudoinverse, pseudoinverse_from_splitting, Pseudoinverse};
pub use transformation::{
    ana_transformations, hcomp, identity_transformation, renaming, renaming_between, vcomp, vcomp_candidates, whisker_after,
    whisker_before, AnaTransformation,
};

/// The image of a functor: `(X₀, f)`.
pub fn alpha(f: &crate::internal::InternalFunctor) -> Anafunctor {
    Anafunctor::from_functor(f)
}

#[cfg(test)]
mod tests;
