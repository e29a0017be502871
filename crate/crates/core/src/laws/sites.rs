//! Pretopology axioms, derived classes and cofinality on the shipped
//! ambients.

use serde_json::json;

use super::{merge, Context, FaultClass, LawId};
use crate::ambient::{lift, probe_objects, Ambient};
use crate::ana::renaming;
use crate::instances::FiniteGroup;
use crate::report::{Check, VerificationReport, Violation};
use crate::sites::{check_pretopology_axioms, cofinality, is_saturated, is_subcanonical, wisc_witness, Pretopology};

/// Size bound for the exhaustive site checks.
const BOUND: usize = 4;

/// A pretopology with its expected properties.
struct Site {
    j: Pretopology,
    saturated: bool,
    subcanonical: bool,
}

fn site(j: Pretopology, saturated: bool, subcanonical: bool) -> Site {
    Site { j, saturated, subcanonical }
}

fn sites(ctx: &Context<'_>) -> Vec<Site> {
    let gset = Ambient::fin_gset(FiniteGroup::cyclic(2));
    let mut out = vec![
        site(Pretopology::triv(Ambient::FinSet), false, true),
        site(Pretopology::split_epis(Ambient::FinSet), true, true),
        site(Pretopology::surjections(Ambient::FinSet), true, true),
        site(Pretopology::all_arrows(Ambient::FinSet), true, false),
        site(Pretopology::split_epis(Ambient::FinGrp), true, true),
        site(Pretopology::epi_grp(), true, true),
        site(Pretopology::surjections(gset), true, true),
    ];
    if ctx.faulty(FaultClass::Pretopology) {
        for s in &mut out {
            s.j = Pretopology::identities(s.j.ambient().clone());
        }
    }
    out
}

pub(super) fn pretopology_axioms(ctx: &Context<'_>) -> VerificationReport {
    let mut parts: Vec<VerificationReport> = sites(ctx).iter().map(|s| check_pretopology_axioms(&s.j, BOUND)).collect();
    if !ctx.faulty(FaultClass::Pretopology) {
        // literal identities miss the non-identity isomorphisms
        let bad = check_pretopology_axioms(&Pretopology::identities(Ambient::FinSet), BOUND);
        let mut check = Check::new("identities-rejected", BOUND);
        check.record(if bad.failed() {
            Ok(())
        } else {
            Err(Violation::new("identities pass the pretopology axioms", ()))
        });
        parts.push(check.finish());
    }
    merge(LawId::PretopologyAxioms, BOUND, parts)
}

pub(super) fn saturation(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::Saturation.qualified(), BOUND);
    for s in sites(ctx) {
        let got = is_saturated(&s.j, BOUND);
        check.record(if got == s.saturated {
            Ok(())
        } else {
            Err(Violation::new(format!("saturation of {} is not as expected", s.j), json!({"saturated": got})))
        });
    }
    check.finish()
}

pub(super) fn subcanonicity(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::Subcanonicity.qualified(), BOUND);
    for s in sites(ctx) {
        let got = is_subcanonical(&s.j, BOUND);
        check.record(if got == s.subcanonical {
            Ok(())
        } else {
            Err(Violation::new(format!("subcanonicity of {} is not as expected", s.j), json!({"subcanonical": got})))
        });
    }
    check.finish()
}

pub(super) fn subcanonical_up_cofinal(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::SubcanonicalUpCofinal.qualified(), BOUND);
    let all = sites(ctx);
    for a in &all {
        for b in all.iter().filter(|b| b.j.ambient() == a.j.ambient()) {
            if cofinality(&a.j, &b.j, BOUND).is_err() || !is_subcanonical(&a.j, BOUND) {
                continue;
            }
            check.record(if is_subcanonical(&b.j, BOUND) {
                Ok(())
            } else {
                Err(Violation::new(format!("{} is subcanonical and cofinal in {}, which is not", a.j, b.j), ()))
            });
        }
    }
    check.skip("no cofinal pairs with a subcanonical smaller pretopology");
    check.finish()
}

/// Every corpus anafunctor with a K-cover is isomorphic, by renaming along
/// a lift of a J-generator, to one with a J-cover.
fn cofinal_pair(ctx: &Context<'_>, j: &Pretopology, k: &Pretopology) -> VerificationReport {
    let law = format!("{}-in-{}", j.name(), k.name());
    if let Err(v) = cofinality(j, k, BOUND) {
        return VerificationReport::skipped(law, BOUND, format!("not cofinal: {}", v.message));
    }
    let mut check = Check::new(law, BOUND);
    for a in &ctx.corpus.anafunctors {
        let f = &a.item;
        if j.ambient() != &super::corpus::ambient_of(f.src()) || !k.contains(f.cover()) {
            continue;
        }
        let Some((c, l)) = j.epi_witness(f.cover()) else {
            check.fail(Violation::new(format!("{}: no J-generator lifts through the cover", a.name), f.cover().table()));
            continue;
        };
        check.record(renaming(f, &l).map_err(|e| Violation::new(e.to_string(), l.table())).and_then(|t| {
            t.validate_iso()?;
            if t.tgt().cover() == &c && j.contains(&c) {
                Ok(())
            } else {
                Err(Violation::new("renamed anafunctor does not have the J-cover", c.table()))
            }
        }));
    }
    check.skip("no corpus anafunctors over this ambient");
    check.finish()
}

pub(super) fn cofinal_equivalence(ctx: &Context<'_>) -> VerificationReport {
    let all = sites(ctx);
    let mut parts = Vec::new();
    for a in &all {
        for b in all.iter().filter(|b| b.j.ambient() == a.j.ambient()) {
            parts.push(cofinal_pair(ctx, &a.j, &b.j));
        }
    }
    merge(LawId::CofinalEquivalence, BOUND, parts)
}

pub(super) fn wisc(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::Wisc.qualified(), 3);
    for s in sites(ctx) {
        for a in probe_objects(s.j.ambient(), 3) {
            let gens = s.j.generators(&a);
            let witness = wisc_witness(&s.j, &a);
            let reached = gens.iter().all(|c| witness.iter().any(|m| lift(m, c).is_some()));
            let members = witness.iter().all(|m| gens.contains(m));
            check.record(if reached && members {
                Ok(())
            } else {
                Err(Violation::new(
                    format!("covers of an object of size {} are not weakly initial for {}", a.size(), s.j),
                    json!({"witness": witness.iter().map(|m| m.table().to_vec()).collect::<Vec<_>>()}),
                ))
            });
        }
    }
    check.finish()
}
