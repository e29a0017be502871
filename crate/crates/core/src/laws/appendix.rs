//! Extensivity of FinSet and the coproduct pretopology of a family
//! pretopology.

use std::sync::Arc;

use super::{merge, Context, FaultClass, LawId};
use crate::ambient::Ambient;
use crate::report::VerificationReport;
use crate::sites::{
    check_coproduct_axioms, check_extensivity, check_jun_equals_coprod_jun, check_subcanonicity_transfer,
    FamilyPretopology, GeneratorFilter, Pretopology, DEFAULT_BOUND,
};

fn families(ctx: &Context<'_>) -> Vec<FamilyPretopology> {
    if ctx.faulty(FaultClass::Family) {
        return vec![FamilyPretopology::covering_subsets().with_filter(GeneratorFilter::ProperMembers)];
    }
    vec![
        FamilyPretopology::covering_subsets(),
        FamilyPretopology::jointly_surjective(),
        FamilyPretopology::singletons(Arc::new(Pretopology::surjections(Ambient::FinSet))),
    ]
}

pub(super) fn extensivity(_ctx: &Context<'_>) -> VerificationReport {
    check_extensivity(&Ambient::FinSet, 3)
}

pub(super) fn coproduct_axioms(ctx: &Context<'_>) -> VerificationReport {
    let parts = families(ctx).iter().map(|f| check_coproduct_axioms(f, DEFAULT_BOUND)).collect();
    merge(LawId::CoproductAxioms, DEFAULT_BOUND, parts)
}

pub(super) fn subcanonicity_transfer(ctx: &Context<'_>) -> VerificationReport {
    let parts = families(ctx).iter().map(|f| check_subcanonicity_transfer(f, DEFAULT_BOUND)).collect();
    merge(LawId::SubcanonicityTransfer, DEFAULT_BOUND, parts)
}

pub(super) fn universal_epis_agree(ctx: &Context<'_>) -> VerificationReport {
    let parts = families(ctx).iter().map(|f| check_jun_equals_coprod_jun(f, DEFAULT_BOUND)).collect();
    merge(LawId::UniversalEpisAgree, DEFAULT_BOUND, parts)
}
