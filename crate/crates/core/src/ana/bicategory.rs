//! The associator and the coherence equations of the anafunctor
//! bicategory.

use serde_json::json;

use super::anafunctor::{compose_ana, Anafunctor};
use super::transformation::{hcomp, renaming_between, vcomp, whisker_after, whisker_before, AnaTransformation};
use crate::ambient::{pullback, Arr};
use crate::error::{Error, Result};
use crate::report::Violation;

/// `(H G) F ⇒ H (G F)`, i.e. from `compose_ana(f, compose_ana(g, h))` to
/// `compose_ana(compose_ana(f, g), h)`: the renaming isomorphism along
/// `((u, v), w) ↦ (u, (v, w))`.
pub fn associator(f: &Anafunctor, g: &Anafunctor, h: &Anafunctor) -> Result<AnaTransformation> {
    let gh = compose_ana(g, h)?;
    let fg = compose_ana(f, g)?;
    let source = compose_ana(f, &gh)?;
    let target = compose_ana(&fg, h)?;
    let uv = pullback(f.functor().f0(), g.cover())?;
    let vw = pullback(g.functor().f0(), h.cover())?;
    let left = pullback(fg.functor().f0(), h.cover())?;
    let right = pullback(f.functor().f0(), gh.cover())?;
    let table = (0..left.len())
        .map(|t| {
            let (p, w) = left.components(t);
            let (u, v) = uv.components(p);
            right.pair(u, vw.pair(v, w))
        })
        .collect();
    let k = Arr::new(left.apex.clone(), right.apex.clone(), table)?;
    renaming_between(&source, &target, &k)
}

/// The associator with its component table corrupted at one point, for
/// checking that the coherence checks can fail.
pub fn corrupted_associator(f: &Anafunctor, g: &Anafunctor, h: &Anafunctor) -> Result<AnaTransformation> {
    let a = associator(f, g, h)?;
    let y = a.src().tgt();
    let mut table = a.component().table().to_vec();
    // Replace the first component by another arrow with the same ends if
    // there is one, else by any other arrow.
    let Some(first) = table.first().copied() else { return Ok(a) };
    let (s, t) = (y.s(first), y.t(first));
    let other = y
        .hom(s, t)
        .iter()
        .copied()
        .find(|&c| c != first)
        .or_else(|| y.arr().elements().find(|&c| c != first));
    let Some(other) = other else { return Ok(a) };
    table[0] = other;
    let comp = Arr::new(a.component().dom().clone(), y.arr().clone(), table)?;
    AnaTransformation::assemble(a.src().clone(), a.tgt().clone(), comp)
}

fn mismatch(law: &str, lhs: &AnaTransformation, rhs: &AnaTransformation) -> Violation {
    let at = lhs
        .component()
        .table()
        .iter()
        .zip(rhs.component().table())
        .position(|(x, y)| x != y);
    Violation::new(
        format!("{law}: the two composites differ"),
        json!({
            "position": at,
            "pair": at.map(|z| lhs.domain().components(z)),
            "lhs": at.map(|z| lhs.component().at(z)),
            "rhs": at.map(|z| rhs.component().at(z)),
        }),
    )
}

fn same(law: &str, lhs: &AnaTransformation, rhs: &AnaTransformation) -> Result<(), Violation> {
    if lhs.src() != rhs.src() || lhs.tgt() != rhs.tgt() {
        return Err(Violation::new(format!("{law}: composites have different endpoints"), ()));
    }
    if lhs.component() != rhs.component() {
        return Err(mismatch(law, lhs, rhs));
    }
    Ok(())
}

fn lift_err(law: &str) -> impl Fn(Error) -> Violation + '_ {
    move |e| Violation::new(format!("{law}: {e}"), ())
}

/// The associator supplier; swapped for a corrupted one under fault
/// injection.
pub type AssociatorFn = fn(&Anafunctor, &Anafunctor, &Anafunctor) -> Result<AnaTransformation>;

/// Pentagon for four composable anafunctors `f, g, h, k` (applied in that
/// order).
pub fn check_pentagon(
    f: &Anafunctor,
    g: &Anafunctor,
    h: &Anafunctor,
    k: &Anafunctor,
    assoc: AssociatorFn,
) -> Result<(), Violation> {
    let law = "pentagon";
    let e = lift_err(law);
    let hk = compose_ana(h, k).map_err(&e)?;
    let fg = compose_ana(f, g).map_err(&e)?;
    let gh = compose_ana(g, h).map_err(&e)?;
    // f(g(hk)) ⇒ (fg)(hk) ⇒ ((fg)h)k
    let top = vcomp(&assoc(f, g, &hk).map_err(&e)?, &assoc(&fg, h, k).map_err(&e)?).map_err(&e)?;
    // f(g(hk)) ⇒ f((gh)k) ⇒ (f(gh))k ⇒ ((fg)h)k
    let first = whisker_before(&assoc(g, h, k).map_err(&e)?, f).map_err(&e)?;
    let second = assoc(f, &gh, k).map_err(&e)?;
    let third = whisker_after(&assoc(f, g, h).map_err(&e)?, k).map_err(&e)?;
    let bottom = vcomp(&vcomp(&first, &second).map_err(&e)?, &third).map_err(&e)?;
    same(law, &top, &bottom)
}

/// Composition with identity anafunctors on either side is literally the
/// identity, and the associator with an identity in any slot is the
/// identity transformation.
pub fn check_unit_strictness(f: &Anafunctor, g: &Anafunctor, assoc: AssociatorFn) -> Result<(), Violation> {
    let law = "unit-strictness";
    let e = lift_err(law);
    let idx = Anafunctor::identity(f.src());
    let idy = Anafunctor::identity(f.tgt());
    if compose_ana(&idx, f).map_err(&e)? != *f {
        return Err(Violation::new("identity on the left is not a strict unit", f.cover().table()));
    }
    if compose_ana(f, &idy).map_err(&e)? != *f {
        return Err(Violation::new("identity on the right is not a strict unit", f.cover().table()));
    }
    let fg = compose_ana(f, g).map_err(&e)?;
    let ident = super::transformation::identity_transformation(&fg);
    for (slot, a) in [
        (0, assoc(&idx, f, g)),
        (1, assoc(f, &idy, g)),
        (2, assoc(f, g, &Anafunctor::identity(g.tgt()))),
    ] {
        let a = a.map_err(&e)?;
        if a != ident {
            return Err(Violation::new(
                "associator with an identity argument is not the identity",
                json!({"slot": slot, "component": a.component().table(), "identity": ident.component().table()}),
            ));
        }
    }
    Ok(())
}

/// Naturality of the associator in each argument, for `a: f ⇒ f'`,
/// `b: g ⇒ g'`, `c: h ⇒ h'` given one at a time.
pub fn check_associator_naturality(
    a: &AnaTransformation,
    g: &Anafunctor,
    h: &Anafunctor,
    slot: usize,
    assoc: AssociatorFn,
) -> Result<(), Violation> {
    let law = "associator-naturality";
    let e = lift_err(law);
    // `a` sits in `slot`; the other two arguments are g and h in order.
    let (lhs, rhs) = match slot {
        0 => {
            let (f, f2) = (a.src(), a.tgt());
            let gh = compose_ana(g, h).map_err(&e)?;
            let left = whisker_after(a, &gh).map_err(&e)?; // f(gh) ⇒ f'(gh)
            let lhs = vcomp(&left, &assoc(f2, g, h).map_err(&e)?).map_err(&e)?;
            let right = whisker_after(&whisker_after(a, g).map_err(&e)?, h).map_err(&e)?;
            let rhs = vcomp(&assoc(f, g, h).map_err(&e)?, &right).map_err(&e)?;
            (lhs, rhs)
        }
        1 => {
            // arguments: g, a, h
            let (m, m2) = (a.src(), a.tgt());
            let mid = whisker_after(a, h).map_err(&e)?; // mh ⇒ m'h
            let left = whisker_before(&mid, g).map_err(&e)?;
            let lhs = vcomp(&left, &assoc(g, m2, h).map_err(&e)?).map_err(&e)?;
            let right = whisker_after(&whisker_before(a, g).map_err(&e)?, h).map_err(&e)?;
            let rhs = vcomp(&assoc(g, m, h).map_err(&e)?, &right).map_err(&e)?;
            (lhs, rhs)
        }
        _ => {
            // arguments: g, h, a
            let (l, l2) = (a.src(), a.tgt());
            let left = whisker_before(&whisker_before(a, h).map_err(&e)?, g).map_err(&e)?;
            let lhs = vcomp(&left, &assoc(g, h, l2).map_err(&e)?).map_err(&e)?;
            let gh = compose_ana(g, h).map_err(&e)?;
            let right = whisker_before(a, &gh).map_err(&e)?;
            let rhs = vcomp(&assoc(g, h, l).map_err(&e)?, &right).map_err(&e)?;
            (lhs, rhs)
        }
    };
    same(law, &lhs, &rhs)
}

/// The vertical composition supplier, swapped like [`AssociatorFn`].
pub type VcompFn = fn(&AnaTransformation, &AnaTransformation) -> Result<AnaTransformation>;

/// Vertical composition with the first component of the result replaced
/// by a different arrow.
pub fn corrupted_vcomp(a: &AnaTransformation, b: &AnaTransformation) -> Result<AnaTransformation> {
    let c = vcomp(a, b)?;
    let y = c.src().tgt();
    let mut table = c.component().table().to_vec();
    let Some(first) = table.first().copied() else { return Ok(c) };
    let Some(other) = y.arr().elements().find(|&x| x != first) else { return Ok(c) };
    table[0] = other;
    let comp = Arr::new(c.component().dom().clone(), y.arr().clone(), table)?;
    AnaTransformation::assemble(c.src().clone(), c.tgt().clone(), comp)
}

/// Interchange: `(b' · b) * (a' · a) = (b' * a') · (b * a)`.
pub fn check_interchange(
    a: &AnaTransformation,
    a2: &AnaTransformation,
    b: &AnaTransformation,
    b2: &AnaTransformation,
    vc: VcompFn,
) -> Result<(), Violation> {
    let law = "interchange";
    let e = lift_err(law);
    let lhs = hcomp(&vc(a, a2).map_err(&e)?, &vc(b, b2).map_err(&e)?).map_err(&e)?;
    let rhs = vc(&hcomp(a, b).map_err(&e)?, &hcomp(a2, b2).map_err(&e)?).map_err(&e)?;
    same(law, &lhs, &rhs)
}

/// Vertical composition is associative on the nose, and the composite is a
/// valid transformation.
pub fn check_vcomp_associative(
    a: &AnaTransformation,
    b: &AnaTransformation,
    c: &AnaTransformation,
    vc: VcompFn,
) -> Result<(), Violation> {
    let law = "vertical-associativity";
    let e = lift_err(law);
    let ab = vc(a, b).map_err(&e)?;
    ab.validate().map_err(|v| v.prefixed(law))?;
    let lhs = vc(&ab, c).map_err(&e)?;
    let rhs = vc(a, &vc(b, c).map_err(&e)?).map_err(&e)?;
    same(law, &lhs, &rhs)
}
