//! Pseudoinverses of equivalences and recognising anafunctors that are
//! isomorphic to functors.

use serde::Serialize;

use super::anafunctor::{compose_ana, Anafunctor};
use super::transformation::AnaTransformation;
use crate::ambient::{homs, lift, Arr};
use crate::error::{Error, Result};
use crate::internal::{classify, ff_preimage, InternalFunctor, LocalSplitting, Verdict};
use crate::sites::Pretopology;

/// An anafunctor `(U, w̄): Y ⇸ X` inverse to `w: X → Y` up to the
/// isotransformations `ι: w (U, w̄) ⇒ 1_Y` and `ε: (U, w̄) w ⇒ 1_X`.
#[derive(Debug, Clone, Serialize)]
pub struct Pseudoinverse {
    pub inverse: Anafunctor,
    pub iota: AnaTransformation,
    pub epsilon: AnaTransformation,
}

/// Pseudoinverse of a J-equivalence, built from its local splitting.
pub fn pseudoinverse(w: &InternalFunctor, j: &Pretopology) -> Result<Pseudoinverse> {
    match classify(w, j) {
        Verdict::Equivalence { witness } => pseudoinverse_from_splitting(w, &witness),
        Verdict::NotFullyFaithful { witness } => Err(Error::Precondition(format!("not a J-equivalence: {witness}"))),
        Verdict::NotLocallySplitWithinBound { bound, .. } => {
            Err(Error::NotFoundWithinBound { what: "local splitting".into(), bound })
        }
    }
}

pub fn pseudoinverse_from_splitting(w: &InternalFunctor, split: &LocalSplitting) -> Result<Pseudoinverse> {
    let (x, y) = (w.dom(), w.cod());
    let inverse = Anafunctor::assemble(y.clone(), x.clone(), split.cover.clone(), split.section.clone())?;
    let wa = Anafunctor::from_functor(w);
    // w ∘ (U, w̄) has cover U and ι is its component
    let there = compose_ana(&inverse, &wa)?;
    let iota = AnaTransformation::from_rule(there, Anafunctor::identity(y), |p, _| Ok(split.iota.at(p)))?;
    // (U, w̄) ∘ w lives on X₀ ×_{Y₀} U; ε is the preimage of ι under w
    let back = compose_ana(&wa, &inverse)?;
    let apex = crate::ambient::pullback(w.f0(), &split.cover)?;
    let epsilon = AnaTransformation::from_rule(back, Anafunctor::identity(x), |z, _| {
        let (xo, u) = apex.components(z);
        ff_preimage(w, split.section.f0().at(u), xo, split.iota.at(u))
            .ok_or_else(|| Error::Precondition("functor is not full".into()))
    })?;
    Ok(Pseudoinverse { inverse, iota, epsilon })
}

/// A functor `f` with an isotransformation `(X₀, f) ⇒ F`, if one is found.
///
/// A section of the cover is tried first, giving `f` directly by
/// restriction; otherwise object maps and components are searched
/// exhaustively. `None` means nothing was found within those searches.
pub fn is_isomorphic_to_functor(a: &Anafunctor) -> Option<(InternalFunctor, AnaTransformation)> {
    let x = a.src();
    let v = a.cover();
    if let Some(section) = lift(&Arr::identity(x.obj()), v) {
        if let Some(found) = through_section(a, &section) {
            return Some(found);
        }
    }
    let y = a.tgt();
    for f0 in homs(x.obj(), y.obj()).ok()? {
        // components c(q): f₀(v q) → g₀ q, invertible
        let choices: Vec<Vec<usize>> = v
            .dom()
            .elements()
            .map(|q| {
                y.hom(f0.at(v.at(q)), a.on_object(q))
                    .iter()
                    .copied()
                    .filter(|&c| y.inverse_of(c).is_some())
                    .collect()
            })
            .collect();
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        let mut idx = vec![0usize; choices.len()];
        loop {
            let table: Vec<usize> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            if let Some(found) = with_components(a, &f0, &table) {
                return Some(found);
            }
            let mut i = 0;
            loop {
                if i == idx.len() {
                    break;
                }
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                break;
            }
        }
    }
    None
}

/// Restricting along a section `σ` of the cover: `f₀ = g₀ σ` with
/// components `c(q) = g(σ v q, q, e)`.
fn through_section(a: &Anafunctor, section: &Arr) -> Option<(InternalFunctor, AnaTransformation)> {
    let x = a.src();
    let v = a.cover();
    let f0 = crate::ambient::comp(a.functor().f0(), section);
    let table: Option<Vec<usize>> = v
        .dom()
        .elements()
        .map(|q| a.on_arrow(section.at(v.at(q)), q, x.e(v.at(q))))
        .collect();
    with_components(a, &f0, &table?)
}

/// Given `f₀` and invertible components `c(q): f₀(v q) → g₀ q`, the arrow
/// map `f₁(x) = c(q₂)⁻¹ ∘ g(q₁, q₂, x) ∘ c(q₁)`, checked to be independent
/// of the chosen `q₁, q₂`.
fn with_components(a: &Anafunctor, f0: &Arr, comps: &[usize]) -> Option<(InternalFunctor, AnaTransformation)> {
    let (x, y) = (a.src(), a.tgt());
    let v = a.cover();
    let mut table = Vec::with_capacity(x.arr().size());
    for h in x.arr().elements() {
        let mut value = None;
        for q1 in v.fiber(x.s(h)) {
            for q2 in v.fiber(x.t(h)) {
                let g = a.on_arrow(q1, q2, h)?;
                let back = y.inverse_of(comps[q2])?;
                let c = y.m(back, y.m(g, comps[q1]));
                match value {
                    None => value = Some(c),
                    Some(prev) if prev != c => return None,
                    Some(_) => {}
                }
            }
        }
        table.push(value?);
    }
    let f1 = Arr::new(x.arr().clone(), y.arr().clone(), table).ok()?;
    let f = InternalFunctor::new(x.clone(), y.clone(), f0.clone(), f1).ok()?;
    let comp = Arr::new(v.dom().clone(), y.arr().clone(), comps.to_vec()).ok()?;
    // X₀ ×_{X₀} V is V itself under the identity normalisation
    let t = AnaTransformation::new(Anafunctor::from_functor(&f), a.clone(), comp).ok()?;
    Some((f, t))
}
