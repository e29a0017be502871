//! The three conditions making the image of functors a localisation at
//! W_J.

use serde_json::json;

use super::{projection_splitting, same_cat, Context, FaultClass, LawId};
use crate::ambient::Arr;
use crate::ana::{
    alpha, alpha_transformation, ana_transformations, compose_ana, pseudoinverse_from_splitting, renaming, Anafunctor,
};
use crate::internal::{transformations, InternalFunctor, NaturalTransformation, ENUMERATION_LIMIT};
use crate::report::{Check, VerificationReport, Violation};

fn err(context: &str) -> impl Fn(crate::Error) -> Violation + '_ {
    move |e| Violation::new(format!("{context}: {e}"), ())
}

pub(super) fn essentially_surjective(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::EssentiallySurjective.qualified(), ctx.bound());
    for c in &ctx.corpus.categories {
        let id = alpha(&InternalFunctor::identity(&c.item));
        check.record(if id == Anafunctor::identity(&c.item) && id.is_functor_image() {
            Ok(())
        } else {
            Err(Violation::new("image of the identity is not the identity anafunctor", &c.name))
        });
    }
    for f in &ctx.corpus.functors {
        let a = alpha(&f.item);
        let structural = same_cat(a.src(), f.item.dom())
            && same_cat(a.tgt(), f.item.cod())
            && a.is_functor_image()
            && a.functor() == &f.item;
        check.record(if structural {
            Ok(())
        } else {
            Err(Violation::new("image of a functor is not identity on objects", &f.name))
        });
    }
    check.finish()
}

/// `(U, f) = α(f) ∘ α(w)⁻¹` for `w: X[U] → X`, with `α(w)⁻¹` the
/// pseudoinverse built on `U` itself.
fn recompose(ctx: &Context<'_>, a: &Anafunctor) -> Result<(), Violation> {
    let (w, split) = projection_splitting(a.base_change()).map_err(err("splitting"))?;
    let u = a.cover();
    let mut inverse = pseudoinverse_from_splitting(&w, &split).map_err(err("pseudoinverse"))?.inverse;
    if ctx.faulty(FaultClass::RenamedInverse) && u.dom().size() > 1 {
        let n = u.dom().size();
        let cycle = Arr::new(u.dom().clone(), u.dom().clone(), (0..n).map(|i| (i + 1) % n).collect())
            .map_err(err("renaming"))?;
        inverse = renaming(&inverse, &cycle).map_err(err("renaming"))?.tgt().clone();
    }
    let composite = compose_ana(&inverse, &alpha(a.functor())).map_err(err("composite"))?;
    if composite != *a {
        return Err(Violation::new(
            "composite with the pseudoinverse differs from the anafunctor",
            json!({
                "cover": a.cover().table(),
                "composite_cover": composite.cover().table(),
                "object_map": a.functor().f0().table(),
                "composite_object_map": composite.functor().f0().table(),
            }),
        ));
    }
    Ok(())
}

pub(super) fn factorisation(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::Factorisation.qualified(), ctx.bound());
    for a in &ctx.corpus.anafunctors {
        check.record(recompose(ctx, &a.item).map_err(|v| v.prefixed(&a.name)));
    }
    check.skip("no anafunctors in the corpus");
    check.finish()
}

/// Transformations `α f ⇒ α g` are exactly the images of transformations
/// `f ⇒ g`, each with a unique preimage.
fn bijection(f: &InternalFunctor, g: &InternalFunctor) -> Result<bool, Violation> {
    let Some(ana) = ana_transformations(&alpha(f), &alpha(g), ENUMERATION_LIMIT) else { return Ok(false) };
    let mut from_ana: Vec<Vec<usize>> = Vec::with_capacity(ana.len());
    for t in &ana {
        let pre = NaturalTransformation::new(f.clone(), g.clone(), t.component().clone())
            .map_err(|e| Violation::new(format!("transformation between images has no preimage: {e}"), t.component().table()))?;
        if alpha_transformation(&pre) != *t {
            return Err(Violation::new("preimage does not map back", t.component().table()));
        }
        from_ana.push(t.component().table().to_vec());
    }
    let mut from_functors: Vec<Vec<usize>> = transformations(f, g)
        .iter()
        .map(|n| alpha_transformation(n).component().table().to_vec())
        .collect();
    from_ana.sort();
    from_functors.sort();
    let distinct = from_functors.windows(2).all(|w| w[0] != w[1]);
    if from_ana != from_functors || !distinct {
        return Err(Violation::new(
            "transformations between images do not match transformations between functors",
            json!({"between_images": from_ana.len(), "between_functors": from_functors.len()}),
        ));
    }
    Ok(true)
}

pub(super) fn locally_fully_faithful(ctx: &Context<'_>) -> VerificationReport {
    let mut check = Check::new(LawId::LocallyFullyFaithful.qualified(), ctx.bound());
    let eligible: Vec<&InternalFunctor> = ctx
        .corpus
        .functors
        .iter()
        .map(|f| &f.item)
        .filter(|f| f.dom().obj().size() <= 3 && f.cod().arr().size() <= 9)
        .collect();
    let mut beyond = 0;
    for (i, f) in eligible.iter().enumerate() {
        for g in &eligible[i..] {
            if !same_cat(f.dom(), g.dom()) || !same_cat(f.cod(), g.cod()) {
                continue;
            }
            for (a, b) in [(f, g), (g, f)] {
                match bijection(a, b) {
                    Ok(true) => check.pass(),
                    Ok(false) => beyond += 1,
                    Err(v) => check.fail(v),
                }
                if f == g {
                    break;
                }
            }
        }
    }
    if beyond > 0 {
        check.note(format!("{beyond} pairs exceed the enumeration limit"));
    }
    check.finish()
}
