//! Categories internal to a finite ambient, with their functors, natural
//! transformations and equivalences.

mod category;
mod constructions;
mod equivalence;
mod functor;

pub use category::{Cat, InternalCategory};
pub use constructions::{
    base_change, base_change_coherence, cech, codisc, delooping, disc, from_discrete, into_codiscrete, strict_pullback,
    to_codiscrete, BaseChange, StrictPullback,
};
pub use equivalence::{
    classify, classify_by_generators, compose_splittings, construct_local_splitting, discrete_probes, essential_image, factor_through_essential_image,
    ff_comparison, ff_failure, ff_preimage, functors, functors_with_object_map, is_bunge_pare_equivalence, is_essentially_j_surjective,
    is_fully_faithful, is_j_equivalence, is_representably_fully_faithful, splitting_through, transformations,
    EssentialImage, LocalSplitting, Verdict, ENUMERATION_LIMIT,
};
pub use functor::{InternalFunctor, NaturalTransformation};
