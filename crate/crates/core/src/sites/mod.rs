//! Pretopologies, their axioms and derived classes, and the coproduct
//! construction on extensive ambients.

mod checks;
mod extensive;
mod family;
mod pretopology;

pub use checks::{
    check_pretopology_axioms, check_subcanonical, cofinality, is_cofinal, is_saturated, is_subcanonical,
    saturation_witness, wisc_witness, CoverCategory,
};
pub use extensive::{
    check_coproduct_axioms, check_extensivity, check_family_subcanonical, check_jun_equals_coprod_jun,
    check_subcanonicity_transfer, is_effective_family, jun_disagreements,
};
pub use family::{coproduct_pretopology, FamilyClass, FamilyPretopology, GeneratorFilter};
pub use pretopology::{CoverClass, Pretopology, DEFAULT_BOUND};
