//! The right calculus of fractions for J-equivalences, witness by witness.

use rand::seq::SliceRandom;
use serde_json::json;

use super::{conjugate, projection_splitting, same_cat, Context, LawId};
use crate::ambient::{arrows_into, comp, lift, probe_objects, pullback, Arr};
use crate::internal::{
    compose_splittings, discrete_probes, ff_preimage, functors, is_j_equivalence, transformations, BaseChange, Cat,
    InternalFunctor, LocalSplitting, NaturalTransformation,
};
use crate::report::{Check, VerificationReport, Violation};

fn err(context: &str) -> impl Fn(crate::Error) -> Violation + '_ {
    move |e| Violation::new(format!("{context}: {e}"), ())
}

fn compose(g: &InternalFunctor, f: &InternalFunctor) -> Result<InternalFunctor, Violation> {
    InternalFunctor::compose(g, f).map_err(err("composite"))
}

/// Corpus functors and identities that the classifier puts in W_J, with
/// their splittings.
fn equivalences(ctx: &Context<'_>) -> Vec<(InternalFunctor, LocalSplitting)> {
    let ids = ctx.corpus.categories.iter().map(|c| InternalFunctor::identity(&c.item));
    ids.chain(ctx.corpus.functors.iter().map(|f| f.item.clone()))
        .filter_map(|f| ctx.splitting(&f).map(|s| (f, s)))
        .collect()
}

/// The splitting must validate against J.
fn in_wj(ctx: &Context<'_>, f: &InternalFunctor) -> Result<(), Violation> {
    match ctx.splitting(f) {
        Some(w) => w.validate(f, ctx.j(f.cod())).map_err(|v| v.prefixed("splitting")),
        None => Err(Violation::new(
            "equivalence is not classified as a J-equivalence",
            json!({"objects": f.f0().table(), "arrows": f.f1().table()}),
        )),
    }
}

/// A section `σ: X → X[U]` of the projection from a section of the cover,
/// checked to be a strict section with `σ p ≅ 1`.
fn section_of_projection(bc: &BaseChange, sec: &Arr) -> Result<InternalFunctor, Violation> {
    let x = bc.base();
    let table = x
        .arr()
        .elements()
        .map(|h| bc.locate(sec.at(x.s(h)), sec.at(x.t(h)), h).expect("section lies over the ends"))
        .collect();
    let s1 = Arr::new(x.arr().clone(), bc.cat().arr().clone(), table).map_err(err("section"))?;
    let sigma = InternalFunctor::new(x.clone(), bc.cat().clone(), sec.clone(), s1).map_err(err("section"))?;
    let p = bc.projection();
    if compose(&p, &sigma)? != InternalFunctor::identity(x) {
        return Err(Violation::new("projection after section is not the identity", sec.table()));
    }
    let u = bc.along();
    let unit_table = bc
        .cat()
        .obj()
        .elements()
        .map(|m| bc.locate(m, sec.at(u.at(m)), x.e(u.at(m))).expect("unit lies over both points"))
        .collect();
    let unit = Arr::new(bc.cat().obj().clone(), bc.cat().arr().clone(), unit_table).map_err(err("unit"))?;
    let eta = NaturalTransformation::new(InternalFunctor::identity(bc.cat()), compose(&sigma, &p)?, unit)
        .map_err(err("unit"))?;
    if !eta.is_iso() {
        return Err(Violation::new("section after projection is not isomorphic to the identity", eta.component().table()));
    }
    Ok(sigma)
}

fn projections(ctx: &Context<'_>) -> Vec<InternalFunctor> {
    ctx.corpus.functors.iter().filter(|f| f.name.starts_with("proj:")).map(|f| f.item.clone()).collect()
}

pub(super) fn equivalences_are_weak(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::EquivalencesAreWeak.qualified(), ctx.bound());
    for c in &ctx.corpus.categories {
        check.record(in_wj(ctx, &InternalFunctor::identity(&c.item)));
    }
    for p in projections(ctx) {
        let bc = match BaseChange::new(p.cod(), p.f0()) {
            Ok(bc) => bc,
            Err(e) => {
                check.fail(Violation::new(e.to_string(), p.f0().table()));
                continue;
            }
        };
        // only projections with a section are equivalences
        let Some(sec) = lift(&Arr::identity(p.cod().obj()), p.f0()) else { continue };
        check.record(in_wj(ctx, &p));
        match section_of_projection(&bc, &sec) {
            Ok(sigma) => check.record(in_wj(ctx, &sigma)),
            Err(v) => check.fail(v),
        }
    }
    check.finish()
}

/// A second projection `X[U][V] → X[U]` on top of each small first one.
fn towers(ctx: &Context<'_>) -> Vec<(InternalFunctor, InternalFunctor)> {
    let mut rng = ctx.rng(LawId::CompositionClosed);
    let mut out = Vec::new();
    for p in projections(ctx) {
        let top = p.dom();
        if top.arr().size() > 12 || top.obj().size() > 4 {
            continue;
        }
        let covers: Vec<Arr> = arrows_into(top.obj(), top.obj().size() + 1)
            .into_iter()
            .filter(|v| v.is_surjective() && !v.is_identity() && ctx.j(top).contains(v))
            .collect();
        let Some(v) = covers.choose(&mut rng) else { continue };
        if let Ok(bc) = BaseChange::new(top, v) {
            out.push((bc.projection(), p.clone()));
        }
    }
    out
}

pub(super) fn composition_closed(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::CompositionClosed.qualified(), ctx.bound());
    let eqs = equivalences(ctx);
    let mut pairs: Vec<(InternalFunctor, InternalFunctor)> = Vec::new();
    for (w1, _) in &eqs {
        for (w2, _) in &eqs {
            if same_cat(w1.cod(), w2.dom()) && !(w1.is_identity() && w2.is_identity()) {
                pairs.push((w1.clone(), w2.clone()));
            }
        }
    }
    let mut rng = ctx.rng(LawId::CompositionClosed);
    pairs.shuffle(&mut rng);
    pairs.truncate(150);
    pairs.extend(towers(ctx).into_iter().filter(|(w1, w2)| is_j_equivalence(w1, ctx.j(w1.cod())) && is_j_equivalence(w2, ctx.j(w2.cod()))));
    let mut outside = 0;
    for (w1, w2) in pairs {
        let j = ctx.j(w2.cod());
        let (Some(s1), Some(s2)) = (ctx.splitting(&w1), ctx.splitting(&w2)) else {
            check.fail(Violation::new("member of W_J lost its splitting", ()));
            continue;
        };
        let w = match compose(&w2, &w1) {
            Ok(w) => w,
            Err(v) => {
                check.fail(v);
                continue;
            }
        };
        match compose_splittings(&w1, &s1, &w2, &s2) {
            Ok(s) if !j.contains(&s.cover) => outside += 1,
            Ok(s) => check.record(s.validate(&w, j).map_err(|v| v.prefixed("composite splitting")).and_then(|_| {
                if is_j_equivalence(&w, j) {
                    Ok(())
                } else {
                    Err(Violation::new("composite is not re-classified into W_J", w.f0().table()))
                }
            })),
            Err(e) => check.fail(Violation::new(format!("composite splitting: {e}"), ())),
        }
    }
    if outside > 0 {
        check.note(format!("{outside} composite covers fall outside the generator list"));
    }
    check.finish()
}

/// `ι'(u) = ι(u) ∘ c(s u)⁻¹`: the splitting of `w` transported along
/// `c: w ⇒ g`.
fn transported(
    g: &InternalFunctor,
    s: &LocalSplitting,
    c: &NaturalTransformation,
) -> Result<LocalSplitting, Violation> {
    let y = g.cod();
    let table = s
        .cover
        .dom()
        .elements()
        .map(|u| {
            let back = y.inverse_of(c.at(s.section.f0().at(u))).expect("isomorphism");
            y.try_m(s.iota.at(u), back).ok_or_else(|| Violation::new("iota does not start at w(s u)", json!({"point": u})))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let comp = Arr::new(s.cover.dom().clone(), y.arr().clone(), table).map_err(err("iota"))?;
    let iota =
        NaturalTransformation::new(compose(g, &s.section)?, s.base_change.projection(), comp).map_err(err("iota"))?;
    Ok(LocalSplitting { iota, ..s.clone() })
}

pub(super) fn iso_closed(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::IsoClosed.qualified(), ctx.bound());
    let mut rng = ctx.rng(LawId::IsoClosed);
    for (w, s) in equivalences(ctx) {
        let Some((g, c)) = conjugate(&w, &mut rng) else { continue };
        let j = ctx.j(g.cod());
        check.record(
            transported(&g, &s, &c)
                .and_then(|t| t.validate(&g, j).map_err(|v| v.prefixed("transported splitting")))
                .and_then(|_| {
                    if is_j_equivalence(&g, j) {
                        Ok(())
                    } else {
                        Err(Violation::new("isomorphic functor is not classified into W_J", g.f0().table()))
                    }
                }),
        );
    }
    check.skip("no J-equivalences between FinSet categories");
    check.finish()
}

/// For `w: X → Y` in W_J with splitting `(U, s, ι)` and `f: Z → Y`: the
/// pullback `Q = Z₀ ×_{Y₀} U`, `v: Z[Q] → Z`, `g = s ∘ k` with
/// `k: Z[Q] → Y[U]`, and `θ: w g ⇒ f v` with `θ(n) = ι(k₀ n)`.
/// Pulled-back covers larger than this are not formed; group structure on
/// their base change grows quadratically.
const MAX_PULLED_BACK: usize = 24;

/// `Ok(false)` when the pulled-back cover exceeds [`MAX_PULLED_BACK`].
fn fill_square(ctx: &Context<'_>, w: &InternalFunctor, s: &LocalSplitting, f: &InternalFunctor) -> Result<bool, Violation> {
    let z = f.dom();
    let j = ctx.j(z);
    let q = pullback(f.f0(), &s.cover).map_err(err("pullback"))?;
    if q.len() > MAX_PULLED_BACK {
        return Ok(false);
    }
    if !j.contains(&q.proj1) {
        return Err(Violation::new("pulled-back cover is not in J", q.proj1.table()));
    }
    let bcz = BaseChange::new(z, &q.proj1).map_err(err("base change"))?;
    let v = bcz.projection();
    let k0 = q.proj2.clone();
    let k1 = bcz
        .cat()
        .arr()
        .elements()
        .map(|a| {
            let (n1, n2, h) = bcz.components(a);
            s.base_change
                .locate(k0.at(n1), k0.at(n2), f.f1().at(h))
                .ok_or_else(|| Violation::new("image arrow does not lie over the cover", json!({"arrow": a})))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let k1 = Arr::new(bcz.cat().arr().clone(), s.base_change.cat().arr().clone(), k1).map_err(err("k"))?;
    let k = InternalFunctor::new(bcz.cat().clone(), s.base_change.cat().clone(), k0.clone(), k1).map_err(err("k"))?;
    if compose(&s.base_change.projection(), &k)? != compose(f, &v)? {
        return Err(Violation::new("square under the splitting does not commute", ()));
    }
    let g = compose(&s.section, &k)?;
    let theta = NaturalTransformation::new(compose(w, &g)?, compose(f, &v)?, comp(s.iota.component(), &k0))
        .map_err(|e| Violation::new(format!("2-cell of the square: {e}"), s.iota.component().table()))?;
    if !theta.is_iso() {
        return Err(Violation::new("2-cell of the square is not invertible", theta.component().table()));
    }
    let (_, split) = projection_splitting(&bcz).map_err(err("splitting of the pulled-back projection"))?;
    split.validate(&v, j).map_err(|e| e.prefixed("pulled-back projection is not in W_J"))?;
    Ok(true)
}

pub(super) fn square_filling(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::SquareFilling.qualified(), ctx.bound());
    let eqs = equivalences(ctx);
    let mut rng = ctx.rng(LawId::SquareFilling);
    let mut beyond = 0;
    for (w, s) in &eqs {
        let mut against: Vec<&InternalFunctor> =
            ctx.corpus.functors.iter().map(|f| &f.item).filter(|f| same_cat(f.cod(), w.cod())).collect();
        against.shuffle(&mut rng);
        for f in against.into_iter().take(4) {
            match fill_square(ctx, w, s, f) {
                Ok(true) => check.pass(),
                Ok(false) => beyond += 1,
                Err(v) => check.fail(v),
            }
        }
    }
    if beyond > 0 {
        check.note(format!("{beyond} squares beyond the size limit"));
    }
    check.skip("no J-equivalences in the corpus");
    check.finish()
}

/// Lifts every `α: w f ⇒ w g` to its unique preimage `a′: f ⇒ g`.
fn lift_two_cells(w: &InternalFunctor, f: &InternalFunctor, g: &InternalFunctor, check: &mut Check) {
    let (wf, wg) = match (InternalFunctor::compose(w, f), InternalFunctor::compose(w, g)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return check.fail(Violation::new("functors do not compose", ())),
    };
    let candidates = transformations(f, g);
    for alpha in transformations(&wf, &wg) {
        check.record(lift_one(w, f, g, &alpha, &candidates));
    }
}

fn lift_one(
    w: &InternalFunctor,
    f: &InternalFunctor,
    g: &InternalFunctor,
    alpha: &NaturalTransformation,
    candidates: &[NaturalTransformation],
) -> Result<(), Violation> {
    let z = f.dom();
    let table = z
        .obj()
        .elements()
        .map(|o| {
            ff_preimage(w, f.f0().at(o), g.f0().at(o), alpha.at(o))
                .ok_or_else(|| Violation::new("component has no preimage", json!({"object": o, "component": alpha.at(o)})))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let comp = Arr::new(z.obj().clone(), w.dom().arr().clone(), table).map_err(err("lift"))?;
    let lifted = NaturalTransformation::new(f.clone(), g.clone(), comp).map_err(err("lift"))?;
    if lifted.whisker_functor_before(w).map_err(err("whisker"))? != *alpha {
        return Err(Violation::new("lift does not whisker back to the 2-cell", alpha.component().table()));
    }
    let preimages = candidates
        .iter()
        .filter(|c| c.whisker_functor_before(w).map(|x| x == *alpha).unwrap_or(false))
        .count();
    if preimages != 1 {
        return Err(Violation::new("lift is not unique", json!({"preimages": preimages})));
    }
    if alpha.is_iso() && !lifted.is_iso() {
        return Err(Violation::new("lift of an isomorphism is not invertible", lifted.component().table()));
    }
    Ok(())
}

pub(super) fn two_cell_lifting(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::TwoCellLifting.qualified(), ctx.bound());
    let mut rng = ctx.rng(LawId::TwoCellLifting);
    let arrow = ctx.corpus.categories.iter().find(|c| c.name == "arrow").map(|c| c.item.clone());
    for (w, _) in equivalences(ctx) {
        let x = w.dom();
        if x.obj().size() > 4 || x.arr().size() > 10 {
            continue;
        }
        let ambient = super::corpus::ambient_of(x);
        let mut shapes: Vec<Cat> = discrete_probes(&probe_objects(&ambient, 2));
        shapes.retain(|z| z.obj().size() > 0);
        if let (crate::ambient::Ambient::FinSet, Some(a)) = (&ambient, &arrow) {
            shapes.push(a.clone());
        }
        for z in shapes {
            let mut fs = functors(&z, x);
            fs.shuffle(&mut rng);
            fs.truncate(4);
            for f in &fs {
                for g in &fs {
                    lift_two_cells(&w, f, g, &mut check);
                }
            }
        }
    }
    check.skip("no J-equivalences with small domain");
    check.finish()
}
