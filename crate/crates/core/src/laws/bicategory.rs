//! Coherence of the anafunctor bicategory on corpus chains.

use rand::seq::SliceRandom;

use super::{same_cat, Context, FaultClass, LawId};
use crate::ana::{
    ana_transformations, associator, check_associator_naturality, check_interchange, check_pentagon,
    check_unit_strictness, check_vcomp_associative, compose_ana, corrupted_associator, corrupted_vcomp,
    identity_transformation, vcomp, AnaTransformation, Anafunctor, AssociatorFn, VcompFn,
};
use crate::report::{Check, VerificationReport};

/// Composites whose cover exceeds this many points are not formed.
const MAX_COMPOSITE_COVER: usize = 48;

fn assoc(ctx: &Context<'_>) -> AssociatorFn {
    if ctx.faulty(FaultClass::Associator) {
        corrupted_associator
    } else {
        associator
    }
}

fn vc(ctx: &Context<'_>) -> VcompFn {
    if ctx.faulty(FaultClass::VerticalComposition) {
        corrupted_vcomp
    } else {
        vcomp
    }
}

/// Composable quadruples: every corpus chain, then random walks through
/// the corpus anafunctors.
fn quadruples(ctx: &Context<'_>) -> Vec<[Anafunctor; 4]> {
    let mut out: Vec<[Anafunctor; 4]> = ctx
        .corpus
        .chains
        .iter()
        .map(|c| [c.links[0].clone(), c.links[1].clone(), c.links[2].clone(), c.links[3].clone()])
        .collect();
    let pool: Vec<&Anafunctor> = ctx
        .corpus
        .anafunctors
        .iter()
        .map(|a| &a.item)
        .filter(|a| a.cover().dom().size() <= 3 && a.tgt().obj().size() <= 2)
        .collect();
    let mut rng = ctx.rng(LawId::Pentagon);
    for _ in 0..60 {
        let Some(&first) = pool.choose(&mut rng) else { break };
        let mut walk = vec![first.clone()];
        while walk.len() < 4 {
            let last = walk.last().expect("nonempty");
            let next: Vec<&&Anafunctor> = pool.iter().filter(|a| same_cat(a.src(), last.tgt())).collect();
            let Some(n) = next.choose(&mut rng) else { break };
            walk.push((**n).clone());
        }
        if walk.len() == 4 && small_composite(&walk) {
            out.push([walk[0].clone(), walk[1].clone(), walk[2].clone(), walk[3].clone()]);
        }
        if out.len() >= 30 {
            break;
        }
    }
    out
}

fn small_composite(walk: &[Anafunctor]) -> bool {
    let mut acc = walk[0].clone();
    for a in &walk[1..] {
        match compose_ana(&acc, a) {
            Ok(c) if c.cover().dom().size() <= MAX_COMPOSITE_COVER => acc = c,
            _ => return false,
        }
    }
    true
}

pub(super) fn pentagon(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::Pentagon.qualified(), ctx.bound());
    let assoc = assoc(ctx);
    for [f, g, h, k] in quadruples(ctx) {
        check.record(check_pentagon(&f, &g, &h, &k, assoc));
    }
    check.skip("no composable quadruples in the corpus");
    check.finish()
}

pub(super) fn unit_strictness(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::UnitStrictness.qualified(), ctx.bound());
    let assoc = assoc(ctx);
    let all: Vec<&Anafunctor> = ctx.corpus.anafunctors.iter().map(|a| &a.item).collect();
    for f in &all {
        let g = all
            .iter()
            .find(|g| same_cat(g.src(), f.tgt()) && g.cover().dom().size() <= 4)
            .map(|g| (*g).clone())
            .unwrap_or_else(|| Anafunctor::identity(f.tgt()));
        check.record(check_unit_strictness(f, &g, assoc));
    }
    check.skip("no anafunctors in the corpus");
    check.finish()
}

pub(super) fn associator_naturality(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::AssociatorNaturality.qualified(), ctx.bound());
    let assoc = assoc(ctx);
    for c in &ctx.corpus.chains {
        let l = &c.links;
        for step in 0..2 {
            check.record(check_associator_naturality(&c.moves[0][step], &l[1], &l[2], 0, assoc));
            check.record(check_associator_naturality(&c.moves[1][step], &l[0], &l[2], 1, assoc));
            check.record(check_associator_naturality(&c.moves[2][step], &l[0], &l[1], 2, assoc));
        }
    }
    check.skip("no chains in the corpus");
    check.finish()
}

pub(super) fn interchange(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::Interchange.qualified(), ctx.bound());
    let vc = vc(ctx);
    for c in &ctx.corpus.chains {
        for i in 0..3 {
            let [a, a2] = &c.moves[i];
            let [b, b2] = &c.moves[i + 1];
            check.record(check_interchange(a, a2, b, b2, vc));
        }
    }
    check.skip("no chains in the corpus");
    check.finish()
}

/// Triples from chain moves padded with identities, and triples of
/// transformations around each parallel family.
fn vertical_triples(ctx: &Context<'_>) -> Vec<[AnaTransformation; 3]> {
    let mut out = Vec::new();
    for c in &ctx.corpus.chains {
        for [a, b] in &c.moves {
            out.push([a.clone(), b.clone(), identity_transformation(b.tgt())]);
            out.push([identity_transformation(a.src()), a.clone(), b.clone()]);
        }
    }
    let mut rng = ctx.rng(LawId::VerticalAssociativity);
    for fam in &ctx.corpus.families {
        let n = fam.len();
        let between = |p: usize, q: usize| ana_transformations(&fam[p], &fam[q], 1 << 14).unwrap_or_default();
        let table: Vec<Vec<Vec<AnaTransformation>>> = (0..n).map(|p| (0..n).map(|q| between(p, q)).collect()).collect();
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let s = (p + q + r) % n;
                    let pick = |v: &Vec<AnaTransformation>, rng: &mut _| v.choose(rng).cloned();
                    let (Some(a), Some(b), Some(c)) =
                        (pick(&table[p][q], &mut rng), pick(&table[q][r], &mut rng), pick(&table[r][s], &mut rng))
                    else {
                        continue;
                    };
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

pub(super) fn vertical_associativity(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::VerticalAssociativity.qualified(), ctx.bound());
    let vc = vc(ctx);
    for [a, b, c] in vertical_triples(ctx) {
        check.record(check_vcomp_associative(&a, &b, &c, vc));
    }
    check.skip("no composable transformations in the corpus");
    check.finish()
}
