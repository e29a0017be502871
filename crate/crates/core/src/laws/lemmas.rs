//! Lemma-level properties instantiated across the corpus.

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use super::{conjugate, same_cat, Context, FaultClass, LawId};
use crate::ambient::{arrows_into, lift, probe_objects, pullback, Arr, Obj, Structure};
use crate::ana::{
    alpha, ana_transformations, compose_ana, is_isomorphic_to_functor, pseudoinverse, vcomp, vcomp_candidates,
    AnaTransformation,
};
use crate::instances::{crossed_module_iso, groupoid_to_xmod, xmod_to_groupoid, CrossedModule};
use crate::internal::{
    base_change, base_change_coherence as coherence_iso, cech, classify_by_generators, codisc, construct_local_splitting, disc,
    discrete_probes, essential_image, factor_through_essential_image, is_bunge_pare_equivalence, is_fully_faithful,
    is_j_equivalence, is_representably_fully_faithful, strict_pullback, BaseChange, Cat, InternalFunctor, Verdict,
};
use crate::report::{Check, VerificationReport, Violation};
use crate::sites::{is_saturated, Pretopology, DEFAULT_BOUND};

fn err(context: &str) -> impl Fn(crate::Error) -> Violation + '_ {
    move |e| Violation::new(format!("{context}: {e}"), ())
}

/// Corpus functors together with the identity of every corpus category.
fn all_functors(ctx: &Context<'_>) -> Vec<(String, InternalFunctor)> {
    let ids = ctx.corpus.categories.iter().map(|c| (format!("id:{}", c.name), InternalFunctor::identity(&c.item)));
    ids.chain(ctx.corpus.functors.iter().map(|f| (f.name.clone(), f.item.clone()))).collect()
}

/// A random J-cover of `a` with a slightly larger domain.
fn random_cover(a: &Obj, j: &Pretopology, rng: &mut impl Rng) -> Option<Arr> {
    let bound = match a.structure() {
        Structure::Group(_) => (2 * a.size()).min(8),
        _ => a.size() + 1,
    };
    let covers: Vec<Arr> = arrows_into(a, bound).into_iter().filter(|c| j.contains(c)).collect();
    covers.choose(rng).cloned()
}

fn validated(what: &str, r: Result<(), Violation>) -> Result<(), Violation> {
    r.map_err(|v| v.prefixed(what))
}

pub(super) fn construction_validity(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::ConstructionValidity.qualified(), ctx.bound());
    let mut rng = ctx.rng(LawId::ConstructionValidity);
    for c in &ctx.corpus.categories {
        let x = &c.item;
        check.record(validated(&c.name, x.validate()));
        check.record(validated("disc", disc(x.obj()).validate()));
        check.record(validated("codisc", codisc(x.obj()).validate()));
        if let Some(u) = random_cover(x.obj(), ctx.j(x), &mut rng) {
            check.record(validated("cech", cech(&u).validate_groupoid()));
            match base_change(x, &u) {
                Ok(b) => check.record(validated("base change", b.validate())),
                Err(e) => check.fail(Violation::new(format!("base change: {e}"), u.table())),
            }
        }
    }
    let fs = &ctx.corpus.functors;
    for (i, f) in fs.iter().enumerate() {
        let partners: Vec<usize> = (0..fs.len()).filter(|&k| same_cat(fs[k].item.cod(), f.item.cod())).collect();
        let k = *partners.choose(&mut rng).unwrap_or(&i);
        let g = &fs[k].item;
        check.record(strict_pullback_valid(&f.item, g).map_err(|v| v.prefixed(&format!("{} x {}", f.name, fs[k].name))));
    }
    for xm in &ctx.corpus.crossed {
        check.record(match xmod_to_groupoid(&xm.item) {
            Ok(x) => validated(&xm.name, x.validate_groupoid()),
            Err(e) => Err(Violation::new(format!("{}: {e}", xm.name), ())),
        });
    }
    check.finish()
}

fn strict_pullback_valid(f: &InternalFunctor, g: &InternalFunctor) -> Result<(), Violation> {
    let p = strict_pullback(f, g).map_err(err("strict pullback"))?;
    p.cat.validate()?;
    p.proj1.validate().map_err(|v| v.prefixed("first projection"))?;
    p.proj2.validate().map_err(|v| v.prefixed("second projection"))?;
    let left = InternalFunctor::compose(f, &p.proj1).map_err(err("square"))?;
    let right = InternalFunctor::compose(g, &p.proj2).map_err(err("square"))?;
    if left != right {
        return Err(Violation::new("strict pullback square does not commute", ()));
    }
    Ok(())
}

fn base_change_coherence_law(ctx: &Context<'_>, check: &mut Check) {
    let mut rng = ctx.rng(LawId::BaseChangeCoherence);
    for c in &ctx.corpus.categories {
        let x = &c.item;
        check.record(match base_change(x, &Arr::identity(x.obj())) {
            Ok(same) if same == *x => Ok(()),
            Ok(_) => Err(Violation::new("base change along the identity is not the category itself", &c.name)),
            Err(e) => Err(Violation::new(format!("{}: {e}", c.name), ())),
        });
        for _ in 0..2 {
            let ps = arrows_into(x.obj(), x.obj().size().min(3) + 1);
            let Some(p) = ps.choose(&mut rng) else { continue };
            let qs = arrows_into(p.dom(), p.dom().size().min(3) + 1);
            let Some(q) = qs.choose(&mut rng) else { continue };
            check.record(coherent(x, p, q).map_err(|v| {
                Violation::new(
                    format!("{}: {}", c.name, v.message),
                    json!({"p": p.table(), "q": q.table(), "detail": v.witness}),
                )
            }));
        }
    }
}

fn coherent(x: &Cat, p: &Arr, q: &Arr) -> Result<(), Violation> {
    let iso = coherence_iso(x, q, p).map_err(err("comparison"))?;
    if !iso.f0().is_identity() {
        return Err(Violation::new("comparison is not the identity on objects", iso.f0().table()));
    }
    if !iso.f1().is_iso() {
        return Err(Violation::new("comparison is not bijective on arrows", iso.f1().table()));
    }
    Ok(())
}

pub(super) fn base_change_coherence(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::BaseChangeCoherence.qualified(), ctx.bound());
    base_change_coherence_law(ctx, &mut check);
    check.finish()
}

/// Largest `|U ×_{X₀} W|` for which vertical composites are compared with
/// the exhaustive oracle.
const DESCENT_DOMAIN: usize = 6;

fn descent_instances(ctx: &Context<'_>) -> Vec<(AnaTransformation, AnaTransformation)> {
    let mut out = Vec::new();
    let mut rng = ctx.rng(LawId::DescentOracle);
    let fits = |a: &AnaTransformation, b: &AnaTransformation| {
        pullback(a.src().cover(), b.tgt().cover()).map(|p| p.len() <= DESCENT_DOMAIN).unwrap_or(false)
    };
    for c in &ctx.corpus.chains {
        for [a, b] in &c.moves {
            if fits(a, b) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    for fam in &ctx.corpus.families {
        let n = fam.len();
        let between: Vec<Vec<Vec<AnaTransformation>>> = (0..n)
            .map(|p| (0..n).map(|q| ana_transformations(&fam[p], &fam[q], 1 << 14).unwrap_or_default()).collect())
            .collect();
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let (xs, ys) = (&between[p][q], &between[q][r]);
                    for _ in 0..2 {
                        if let (Some(a), Some(b)) = (xs.choose(&mut rng), ys.choose(&mut rng)) {
                            if fits(a, b) {
                                out.push((a.clone(), b.clone()));
                            }
                        }
                    }
                }
            }
        }
    }
    out.truncate(400);
    out
}

pub(super) fn descent_oracle(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::DescentOracle.qualified(), DESCENT_DOMAIN);
    for (a, b) in descent_instances(ctx) {
        let descended = vcomp(&a, &b);
        let oracle = vcomp_candidates(&a, &b, 1 << 22);
        check.record(match (descended, oracle) {
            (Ok(c), Some(cands)) if cands.len() == 1 && cands[0] == c.component().table() => Ok(()),
            (Ok(c), Some(cands)) => Err(Violation::new(
                "descended component differs from the unique solution",
                json!({"descended": c.component().table(), "solutions": cands}),
            )),
            (Err(e), _) => Err(Violation::new(format!("descent failed: {e}"), a.component().table())),
            (_, None) => Err(Violation::new("oracle search exceeded its limit", ())),
        });
    }
    check.skip("no composable transformations with a small domain");
    check.finish()
}

fn bp_instance(ctx: &Context<'_>, f: &InternalFunctor, j: &Pretopology) -> Result<(), Violation> {
    let bp = is_bunge_pare_equivalence(f, j) != ctx.faulty(FaultClass::Classifier);
    let by_generators = classify_by_generators(f, j);
    if bp != by_generators.is_equivalence() {
        return Err(Violation::new(
            "Bunge-Pare and J-equivalence classifiers disagree",
            json!({"bunge_pare": bp, "verdict": by_generators, "objects": f.f0().table(), "arrows": f.f1().table()}),
        ));
    }
    if bp {
        let w = construct_local_splitting(f, j).map_err(err("splitting from essential surjectivity"))?;
        w.validate(f, j).map_err(|v| v.prefixed("splitting from essential surjectivity"))?;
    }
    if let Verdict::Equivalence { witness } = by_generators {
        factor_through_essential_image(f, &witness).map_err(err("factorisation through the essential image"))?;
        if !j.contains(&essential_image(f).star) {
            return Err(Violation::new("essential image map is not a cover despite saturation", ()));
        }
    }
    Ok(())
}

pub(super) fn bunge_pare_agreement(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::BungePareAgreement.qualified(), DEFAULT_BOUND);
    for j in ctx.pretopologies() {
        check.record(if is_saturated(j, DEFAULT_BOUND) {
            Ok(())
        } else {
            Err(Violation::new(format!("{j} is not saturated"), ()))
        });
    }
    for (name, f) in all_functors(ctx) {
        check.record(bp_instance(ctx, &f, ctx.j(f.cod())).map_err(|v| v.prefixed(&name)));
    }
    check.finish()
}

pub(super) fn pseudoinverses(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::Pseudoinverse.qualified(), ctx.bound());
    for (name, w) in all_functors(ctx) {
        let j = ctx.j(w.cod());
        if !is_j_equivalence(&w, j) {
            continue;
        }
        let r = pseudoinverse(&w, j).map_err(err("construction")).and_then(|p| {
            p.inverse.validate(j).map_err(|v| v.prefixed("inverse"))?;
            p.iota.validate_iso().map_err(|v| v.prefixed("iota"))?;
            p.epsilon.validate_iso().map_err(|v| v.prefixed("epsilon"))
        });
        check.record(r.map_err(|v| v.prefixed(&name)));
    }
    check.skip("no J-equivalences in the corpus");
    check.finish()
}

pub(super) fn fully_faithful_iso_closed(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::FullyFaithfulIsoClosed.qualified(), ctx.bound());
    let mut rng = ctx.rng(LawId::FullyFaithfulIsoClosed);
    for (name, f) in all_functors(ctx) {
        let Some((g, a)) = conjugate(&f, &mut rng) else { continue };
        check.record(if is_fully_faithful(&f) == is_fully_faithful(&g) && a.is_iso() {
            Ok(())
        } else {
            Err(Violation::new(
                format!("{name}: full faithfulness changes along an isomorphism"),
                json!({"isomorphism": a.component().table()}),
            ))
        });
    }
    check.finish()
}

pub(super) fn representably_fully_faithful(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::RepresentablyFullyFaithful.qualified(), 2);
    for (name, f) in all_functors(ctx) {
        if f.dom().obj().size() > 3 || f.dom().arr().size() > 9 {
            continue;
        }
        let ambient = super::corpus::ambient_of(f.dom());
        let objs: Vec<Obj> = probe_objects(&ambient, 2).into_iter().filter(|o| o.size() > 0).collect();
        let probes = discrete_probes(&objs);
        let ff = is_fully_faithful(&f);
        let rep = is_representably_fully_faithful(&f, &probes);
        let expected = if ambient == crate::ambient::Ambient::FinSet { ff == rep } else { !ff || rep };
        check.record(if expected {
            Ok(())
        } else {
            Err(Violation::new(format!("{name}: representable full faithfulness disagrees"), json!({"ff": ff, "representably_ff": rep})))
        });
    }
    check.finish()
}

/// `Y[Y₀ ×_{X₀} U]` against the strict pullback of `f: Y → X` and
/// `X[U] → X`, compared by the canonical functor between them.
fn pullback_of_base_change(f: &InternalFunctor, u: &Arr) -> Result<(), Violation> {
    let (y, x) = (f.dom(), f.cod());
    let bcx = BaseChange::new(x, u).map_err(err("base change"))?;
    let p = strict_pullback(f, &bcx.projection()).map_err(err("strict pullback"))?;
    let q = pullback(f.f0(), u).map_err(err("pullback"))?;
    let bcy = BaseChange::new(y, &q.proj1).map_err(err("base change"))?;
    if &q.apex != p.cat.obj() {
        return Err(Violation::new("object pullbacks differ", ()));
    }
    let table = bcy
        .cat()
        .arr()
        .elements()
        .map(|z| {
            let (n1, n2, h) = bcy.components(z);
            let over = bcx
                .locate(q.proj2.at(n1), q.proj2.at(n2), f.f1().at(h))
                .ok_or_else(|| Violation::new("image arrow does not lie over the cover", json!({"arrow": z})))?;
            p.arrows.locate(h, over).ok_or_else(|| Violation::new("pair is not an arrow of the strict pullback", json!({"arrow": z})))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let c1 = Arr::new(bcy.cat().arr().clone(), p.cat.arr().clone(), table).map_err(err("comparison"))?;
    let c = InternalFunctor::new(bcy.cat().clone(), p.cat.clone(), Arr::identity(&q.apex), c1).map_err(err("comparison"))?;
    if !c.f1().is_iso() {
        return Err(Violation::new("comparison is not bijective on arrows", c.f1().table()));
    }
    if InternalFunctor::compose(&p.proj1, &c).map_err(err("comparison"))? != bcy.projection() {
        return Err(Violation::new("comparison does not commute with the projections", ()));
    }
    Ok(())
}

pub(super) fn strict_pullback_of_base_change(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::StrictPullbackOfBaseChange.qualified(), ctx.bound());
    let mut rng = ctx.rng(LawId::StrictPullbackOfBaseChange);
    for f in &ctx.corpus.functors {
        let x = f.item.cod();
        if x.arr().size() > 10 || f.item.dom().arr().size() > 10 {
            continue;
        }
        let Some(u) = random_cover(x.obj(), ctx.j(x), &mut rng) else { continue };
        check.record(pullback_of_base_change(&f.item, &u).map_err(|v| v.prefixed(&f.name)));
    }
    check.finish()
}

pub(super) fn functor_images_compose(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::FunctorImagesCompose.qualified(), ctx.bound());
    let fs = all_functors(ctx);
    for (nf, f) in &fs {
        for (ng, g) in fs.iter().filter(|(_, g)| same_cat(g.dom(), f.cod())) {
            if check.instances() >= 400 {
                break;
            }
            let r = InternalFunctor::compose(g, f).map_err(err("composite")).and_then(|gf| {
                let c = compose_ana(&alpha(f), &alpha(g)).map_err(err("anafunctor composite"))?;
                if c == alpha(&gf) {
                    Ok(())
                } else {
                    Err(Violation::new(format!("images of {nf} then {ng} do not compose to the image"), ()))
                }
            });
            check.record(r);
        }
    }
    check.finish()
}

pub(super) fn anafunctor_recognition(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::AnafunctorRecognition.qualified(), ctx.bound());
    for a in &ctx.corpus.anafunctors {
        let a = &a.item;
        if lift(&Arr::identity(a.src().obj()), a.cover()).is_none() {
            continue;
        }
        check.record(match is_isomorphic_to_functor(a) {
            Some((f, t)) => t.validate_iso().and_then(|_| {
                if t.src() == &alpha(&f) && t.tgt() == a {
                    Ok(())
                } else {
                    Err(Violation::new("recognised transformation has the wrong ends", ()))
                }
            }),
            None => Err(Violation::new("split anafunctor not recognised as a functor", a.cover().table())),
        });
    }
    check.finish()
}

/// `Z₂` acting on `Z₄` by inversion over `Z₄ → Z₂`: equivariant, but the
/// Peiffer identity fails.
fn inverted_action() -> CrossedModule {
    use crate::instances::FiniteGroup;
    CrossedModule {
        g: std::sync::Arc::new(FiniteGroup::cyclic(4)),
        h: std::sync::Arc::new(FiniteGroup::cyclic(2)),
        t: vec![0, 1, 0, 1],
        action: vec![vec![0, 1, 2, 3], vec![0, 3, 2, 1]],
    }
}

fn crossed_instance(xm: &CrossedModule) -> Result<(), Violation> {
    xm.validate()?;
    let x = xmod_to_groupoid(xm).map_err(err("groupoid"))?;
    x.validate_groupoid()?;
    if !x.src().is_surjective() || !x.tgt().is_surjective() {
        return Err(Violation::new("source or target is not surjective", ()));
    }
    let back = groupoid_to_xmod(&x).map_err(err("round trip"))?;
    if crossed_module_iso(xm, &back).is_none() {
        return Err(Violation::new("round trip is not isomorphic to the crossed module", ()));
    }
    Ok(())
}

pub(super) fn crossed_modules(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::CrossedModules.qualified(), 8);
    let mut modules: Vec<(String, CrossedModule)> =
        ctx.corpus.crossed.iter().map(|c| (c.name.clone(), c.item.clone())).collect();
    if ctx.faulty(FaultClass::CrossedAction) {
        modules.push(("Z4->Z2 inverted".into(), inverted_action()));
    } else {
        check.record(match inverted_action().validate() {
            Err(_) => Ok(()),
            Ok(()) => Err(Violation::new("action violating the Peiffer identity was accepted", ())),
        });
    }
    let groupoids = ctx
        .corpus
        .categories
        .iter()
        .filter(|c| c.item.is_groupoid() && matches!(c.item.obj().structure(), Structure::Group(_)));
    for c in groupoids {
        match groupoid_to_xmod(&c.item) {
            Ok(m) => modules.push((format!("of {}", c.name), m)),
            Err(e) => check.fail(Violation::new(format!("{}: {e}", c.name), ())),
        }
    }
    for (name, xm) in &modules {
        check.record(crossed_instance(xm).map_err(|v| v.prefixed(name)));
    }
    check.finish()
}
