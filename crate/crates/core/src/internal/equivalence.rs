//! Full faithfulness, essential surjectivity and the two classifiers of
//! internal equivalences.

use serde::Serialize;
use serde_json::json;

use super::category::Cat;
use super::constructions::BaseChange;
use super::functor::{InternalFunctor, NaturalTransformation};
use crate::ambient::{comp, for_each_choice, homs, lift, product_arrow, pullback, Arr, Obj, PullbackResult, Structure};
use crate::error::{Error, Result};
use crate::report::Violation;
use crate::sites::Pretopology;

/// The comparison arrow `X₁ → (X₀ × X₀) ×_{Y₀ × Y₀} Y₁`.
pub fn ff_comparison(f: &InternalFunctor) -> (PullbackResult, Arr) {
    let (_, st_x) = f.dom().source_target();
    let (_, st_y) = f.cod().source_target();
    let ff = product_arrow(f.f0(), f.f0()).expect("object component");
    let q = pullback(&ff, &st_y).expect("cospan over Y₀ × Y₀");
    let c = q.mediate(&st_x, f.f1()).expect("functor commutes with (s, t)");
    (q, c)
}

/// The square of `(s, t)` and `f₀ × f₀` against `f₁` is a pullback.
pub fn is_fully_faithful(f: &InternalFunctor) -> bool {
    ff_comparison(f).1.is_iso()
}

/// A witness `(x₁, x₂, y)` where `f` is not bijective on the hom-set.
pub fn ff_failure(f: &InternalFunctor) -> Option<Violation> {
    let (x, y) = (f.dom(), f.cod());
    for a in x.obj().elements() {
        for b in x.obj().elements() {
            let images: Vec<usize> = x.hom(a, b).iter().map(|&g| f.f1().at(g)).collect();
            let target = y.hom(f.f0().at(a), f.f0().at(b));
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != images.len() || sorted.len() != target.len() {
                return Some(Violation::new(
                    "functor is not bijective on arrows between these objects",
                    json!({"from": a, "to": b, "images": images, "available": target}),
                ));
            }
        }
    }
    None
}

/// The unique `x: a → b` with `f₁ x = y`, for fully faithful `f`.
pub fn ff_preimage(f: &InternalFunctor, a: usize, b: usize, y: usize) -> Option<usize> {
    f.dom().hom(a, b).iter().copied().find(|&g| f.f1().at(g) == y)
}

/// `X₀ ×_{Y₀} Y₁^iso` with the arrow `⊛ = t ∘ i ∘ pr₂` into `Y₀`.
#[derive(Debug, Clone)]
pub struct EssentialImage {
    pub isos: Arr,
    pub apex: PullbackResult,
    pub star: Arr,
}

pub fn essential_image(f: &InternalFunctor) -> EssentialImage {
    let y = f.cod();
    let isos = y.iso_arrows();
    let apex = pullback(f.f0(), &comp(y.src(), &isos)).expect("both into Y₀");
    let star = comp(y.tgt(), &comp(&isos, &apex.proj2));
    EssentialImage { isos, apex, star }
}

pub fn is_essentially_j_surjective(f: &InternalFunctor, j: &Pretopology) -> bool {
    j.contains(&essential_image(f).star)
}

/// A J-local splitting of `f`: a cover `u: U → Y₀`, a functor
/// `s: Y[U] → X` and a natural isomorphism `ι: f ∘ s ⇒ Y[U] → Y`.
#[derive(Debug, Clone, Serialize)]
pub struct LocalSplitting {
    pub cover: Arr,
    pub section: InternalFunctor,
    pub iota: NaturalTransformation,
    #[serde(skip)]
    pub base_change: BaseChange,
}

impl LocalSplitting {
    pub fn validate(&self, f: &InternalFunctor, j: &Pretopology) -> Result<(), Violation> {
        if !j.contains(&self.cover) {
            return Err(Violation::new("splitting cover is not in the pretopology", self.cover.table()));
        }
        self.section.validate().map_err(|v| v.prefixed("section"))?;
        self.iota.validate().map_err(|v| v.prefixed("iota"))?;
        if !self.iota.is_iso() {
            return Err(Violation::new("iota is not invertible", self.iota.component().table()));
        }
        let fs = InternalFunctor::compose(f, &self.section).map_err(|e| Violation::new(e.to_string(), ()))?;
        if self.iota.src() != &fs || self.iota.tgt() != &self.base_change.projection() {
            return Err(Violation::new("iota has the wrong endpoints", ()));
        }
        Ok(())
    }
}

/// Builds the splitting on a cover `u` that factors through `⊛` as
/// `u = ⊛ ∘ l`.
pub fn splitting_through(f: &InternalFunctor, u: &Arr, l: &Arr) -> Result<LocalSplitting> {
    let (x, y) = (f.dom(), f.cod());
    let im = essential_image(f);
    if comp(&im.star, l) != *u {
        return Err(Error::Precondition("cover does not factor through the essential image".into()));
    }
    let bc = BaseChange::new(y, u)?;
    let s0 = comp(&im.apex.proj1, l);
    let iota = comp(&im.isos, &comp(&im.apex.proj2, l));
    let mut table = Vec::with_capacity(bc.cat().arr().size());
    for z in bc.cat().arr().elements() {
        let (u1, u2, g) = bc.components(z);
        let back = y.inverse_of(iota.at(u2)).ok_or(Error::NotInvertible)?;
        let target = y.m(back, y.m(g, iota.at(u1)));
        let pre = ff_preimage(f, s0.at(u1), s0.at(u2), target)
            .ok_or_else(|| Error::Precondition("functor is not full".into()))?;
        table.push(pre);
    }
    let s1 = Arr::new(bc.cat().arr().clone(), x.arr().clone(), table)?;
    let section = InternalFunctor::new(bc.cat().clone(), x.clone(), s0, s1)?;
    let fs = InternalFunctor::compose(f, &section)?;
    let iota = NaturalTransformation::new(fs, bc.projection(), iota)?;
    Ok(LocalSplitting { cover: u.clone(), section, iota, base_change: bc })
}

/// The splitting on the cover `⊛: X₀ ×_{Y₀} Y₁^iso → Y₀`, for fully
/// faithful, essentially J-surjective `f`.
pub fn construct_local_splitting(f: &InternalFunctor, j: &Pretopology) -> Result<LocalSplitting> {
    if !is_fully_faithful(f) {
        return Err(Error::Precondition("functor is not fully faithful".into()));
    }
    let im = essential_image(f);
    if !j.contains(&im.star) {
        return Err(Error::Precondition("functor is not essentially J-surjective".into()));
    }
    let l = Arr::identity(im.star.dom());
    splitting_through(f, &im.star, &l)
}

/// A splitting of `w₂ ∘ w₁` from splittings of `w₁: X → Y` and
/// `w₂: Y → Z`: on the cover `U₂ ×_{Y₀} U₁ → U₂ → Z₀`, the point `(a, b)`
/// goes to `s₁ b` with the isomorphism `ι₂(a) ∘ w₂(ι₁(b))`.
pub fn compose_splittings(
    w1: &InternalFunctor,
    s1: &LocalSplitting,
    w2: &InternalFunctor,
    s2: &LocalSplitting,
) -> Result<LocalSplitting> {
    let w = InternalFunctor::compose(w2, w1)?;
    let z = w2.cod();
    let pairs = pullback(s2.section.f0(), &s1.cover)?;
    let cover = comp(&s2.cover, &pairs.proj1);
    let im = essential_image(&w);
    let table = (0..pairs.len())
        .map(|n| {
            let (a, b) = pairs.components(n);
            let c = z
                .try_m(s2.iota.at(a), w2.f1().at(s1.iota.at(b)))
                .ok_or_else(|| Error::Invalid("splitting isomorphisms do not compose".into()))?;
            let k = im.isos.table().iter().position(|&i| i == c).ok_or(Error::NotInvertible)?;
            im.apex
                .locate(s1.section.f0().at(b), k)
                .ok_or_else(|| Error::Invalid("isomorphism does not start at the image of the section".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let l = Arr::new(pairs.apex.clone(), im.apex.apex.clone(), table)?;
    splitting_through(&w, &cover, &l)
}

/// Outcome of classifying a functor.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Equivalence { witness: Box<LocalSplitting> },
    NotFullyFaithful { witness: Violation },
    /// No splitting was found among the covers tried; this is not a proof
    /// that none exists.
    NotLocallySplitWithinBound { bound: usize, covers_tried: usize },
}

impl Verdict {
    pub fn is_equivalence(&self) -> bool {
        matches!(self, Verdict::Equivalence { .. })
    }
}

/// Fully faithful and essentially J-surjective.
pub fn is_bunge_pare_equivalence(f: &InternalFunctor, j: &Pretopology) -> bool {
    is_fully_faithful(f) && is_essentially_j_surjective(f, j)
}

/// Fully faithful and J-locally split. The canonical cover is tried first,
/// then every generator cover of `Y₀` in order; for saturated J the first
/// attempt decides.
pub fn classify(f: &InternalFunctor, j: &Pretopology) -> Verdict {
    if let Some(v) = ff_failure(f) {
        return Verdict::NotFullyFaithful { witness: v };
    }
    if let Ok(w) = construct_local_splitting(f, j) {
        return Verdict::Equivalence { witness: Box::new(w) };
    }
    match classify_by_generators(f, j) {
        Verdict::NotLocallySplitWithinBound { bound, covers_tried } => {
            Verdict::NotLocallySplitWithinBound { bound, covers_tried: covers_tried + 1 }
        }
        v => v,
    }
}

/// Like [`classify`] but searching only the generator covers of `Y₀`,
/// never consulting membership of `⊛` itself.
pub fn classify_by_generators(f: &InternalFunctor, j: &Pretopology) -> Verdict {
    if let Some(v) = ff_failure(f) {
        return Verdict::NotFullyFaithful { witness: v };
    }
    let im = essential_image(f);
    let gens = j.generators(f.cod().obj());
    for u in gens.iter() {
        if let Some(l) = lift(u, &im.star) {
            if let Ok(w) = splitting_through(f, u, &l) {
                return Verdict::Equivalence { witness: Box::new(w) };
            }
        }
    }
    Verdict::NotLocallySplitWithinBound { bound: j.bound(), covers_tried: gens.len() }
}

pub fn is_j_equivalence(f: &InternalFunctor, j: &Pretopology) -> bool {
    classify(f, j).is_equivalence()
}

/// The converse construction: from a splitting, the factorisation of its
/// cover through `⊛`, whose membership in J then follows by saturation.
pub fn factor_through_essential_image(f: &InternalFunctor, w: &LocalSplitting) -> Result<Arr> {
    let im = essential_image(f);
    let y = f.cod();
    let iso_index = |g: usize| im.isos.table().iter().position(|&h| h == g);
    let mut table = Vec::with_capacity(w.cover.dom().size());
    for u in w.cover.dom().elements() {
        let x = w.section.f0().at(u);
        let g = w.iota.at(u);
        let k = iso_index(g).ok_or(Error::NotInvertible)?;
        debug_assert_eq!(y.s(g), f.f0().at(x));
        table.push(im.apex.locate(x, k).ok_or_else(|| Error::Invalid("iota does not start at f(s(u))".into()))?);
    }
    let l = Arr::new(w.cover.dom().clone(), im.apex.apex.clone(), table)?;
    if comp(&im.star, &l) != w.cover {
        return Err(Error::Invalid("factorisation does not recover the cover".into()));
    }
    Ok(l)
}

/// Cap on the candidate tables examined by [`functors`] and
/// [`transformations`] for one object map.
pub const ENUMERATION_LIMIT: usize = 1 << 20;

/// Functors `Z → X`. For each object map the arrow map is searched among
/// tables sending units to units and every other arrow into the right
/// hom-set (or among ambient morphisms, for structured arrow objects).
/// Object maps whose search exceeds [`ENUMERATION_LIMIT`] contribute
/// nothing.
pub fn functors(z: &Cat, x: &Cat) -> Vec<InternalFunctor> {
    let Ok(f0s) = homs(z.obj(), x.obj()) else { return Vec::new() };
    let structured = !matches!(z.arr().structure(), Structure::Set);
    let f1s = if structured { homs(z.arr(), x.arr()).ok() } else { None };
    f0s.iter().flat_map(|f0| over_object_map(z, x, f0, f1s.as_deref())).collect()
}

/// The functors `Z → X` with object component `f0`.
pub fn functors_with_object_map(z: &Cat, x: &Cat, f0: &Arr) -> Vec<InternalFunctor> {
    let structured = !matches!(z.arr().structure(), Structure::Set);
    let f1s = if structured { homs(z.arr(), x.arr()).ok() } else { None };
    over_object_map(z, x, f0, f1s.as_deref())
}

fn over_object_map(z: &Cat, x: &Cat, f0: &Arr, f1s: Option<&[Arr]>) -> Vec<InternalFunctor> {
    let mut out = Vec::new();
    let mut consider = |table: &[usize]| {
        if let Ok(f1) = Arr::new(z.arr().clone(), x.arr().clone(), table.to_vec()) {
            if let Ok(f) = InternalFunctor::assemble(z.clone(), x.clone(), f0.clone(), f1) {
                if f.validate().is_ok() {
                    out.push(f);
                }
            }
        }
    };
    match f1s {
        Some(list) => list.iter().for_each(|f1| consider(f1.table())),
        None => {
            let options: Vec<Vec<usize>> = z
                .arr()
                .elements()
                .map(|a| {
                    let (p, q) = (f0.at(z.s(a)), f0.at(z.t(a)));
                    if z.e(z.s(a)) == a {
                        vec![x.e(p)]
                    } else {
                        x.hom(p, q).to_vec()
                    }
                })
                .collect();
            for_each_choice(&options, ENUMERATION_LIMIT, |t| {
                consider(t);
                true
            });
        }
    }
    out
}

/// Natural transformations `f ⇒ g`, searching components `c(z)` in the
/// hom-set from `f z` to `g z`.
pub fn transformations(f: &InternalFunctor, g: &InternalFunctor) -> Vec<NaturalTransformation> {
    let (z, x) = (f.dom(), f.cod());
    let options: Vec<Vec<usize>> =
        z.obj().elements().map(|o| x.hom(f.f0().at(o), g.f0().at(o)).to_vec()).collect();
    let mut out = Vec::new();
    for_each_choice(&options, ENUMERATION_LIMIT, |t| {
        if let Ok(c) = Arr::new(z.obj().clone(), x.arr().clone(), t.to_vec()) {
            if let Ok(a) = NaturalTransformation::new(f.clone(), g.clone(), c) {
                out.push(a);
            }
        }
        true
    });
    out
}

/// Post-composition with `f` is fully faithful on hom-categories out of
/// every probe: transformations `g ⇒ h` correspond bijectively to
/// transformations `f g ⇒ f h`.
pub fn is_representably_fully_faithful(f: &InternalFunctor, probes: &[Cat]) -> bool {
    probes.iter().all(|z| {
        let fs = functors(z, f.dom());
        fs.iter().all(|g| {
            fs.iter().all(|h| {
                let fg = InternalFunctor::compose(f, g).expect("composable");
                let fh = InternalFunctor::compose(f, h).expect("composable");
                let mut images: Vec<Vec<usize>> = transformations(g, h)
                    .iter()
                    .map(|a| a.whisker_functor_before(f).expect("composable").component().table().to_vec())
                    .collect();
                let n = images.len();
                images.sort();
                images.dedup();
                images.len() == n && n == transformations(&fg, &fh).len()
            })
        })
    })
}

/// `disc(A)` for each probe object `A`, used as test shapes.
pub fn discrete_probes(objects: &[Obj]) -> Vec<Cat> {
    objects.iter().map(super::constructions::disc).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::Ambient;
    use crate::internal::{codisc, disc, into_codiscrete};

    fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
        Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).unwrap()
    }

    fn point_of_codisc() -> InternalFunctor {
        into_codiscrete(&disc(&Obj::set(1)), &map(1, 2, &[0])).unwrap()
    }

    #[test]
    fn fully_faithful_examples() {
        let c2 = codisc(&Obj::set(2));
        assert!(is_fully_faithful(&InternalFunctor::identity(&c2)));
        let one = disc(&Obj::set(1));
        let bang = |x: &Cat| {
            InternalFunctor::new(x.clone(), one.clone(), Arr::to_terminal(x.obj()), Arr::to_terminal(x.arr()))
                .unwrap()
        };
        assert!(is_fully_faithful(&bang(&c2)));
        let d2 = disc(&Obj::set(2));
        assert!(!is_fully_faithful(&bang(&d2)));
        assert!(ff_failure(&bang(&d2)).is_some());
        assert!(ff_failure(&bang(&c2)).is_none());
    }

    #[test]
    fn essential_surjectivity() {
        let surj = Pretopology::surjections(Ambient::FinSet);
        let j = point_of_codisc();
        assert!(is_essentially_j_surjective(&j, &surj));
        let d2 = disc(&Obj::set(2));
        let one = disc(&Obj::set(1));
        let incl = InternalFunctor::new(one, d2, map(1, 2, &[0]), map(1, 2, &[0])).unwrap();
        assert!(!is_essentially_j_surjective(&incl, &surj));
        assert!(!is_j_equivalence(&incl, &surj));
    }

    #[test]
    fn splittings_validate() {
        let surj = Pretopology::surjections(Ambient::FinSet);
        let j = point_of_codisc();
        let w = construct_local_splitting(&j, &surj).unwrap();
        assert_eq!(w.cover.dom().size(), 2);
        assert!(w.validate(&j, &surj).is_ok());
        let l = factor_through_essential_image(&j, &w).unwrap();
        assert!(l.is_identity());
        let c2 = codisc(&Obj::set(2));
        let id = InternalFunctor::identity(&c2);
        let w = construct_local_splitting(&id, &surj).unwrap();
        assert!(w.validate(&id, &surj).is_ok());
        assert!(matches!(classify(&j, &surj), Verdict::Equivalence { .. }));
    }

    #[test]
    fn classifiers_on_non_saturated_pretopology() {
        // the splitting cover exists only as a generator, not as ⊛ itself
        let split = Pretopology::split_epis(Ambient::FinSet);
        let j = point_of_codisc();
        assert_eq!(is_bunge_pare_equivalence(&j, &split), is_j_equivalence(&j, &split));
        // here ⊛ is a bijection, so even the isomorphisms suffice
        let triv = Pretopology::triv(Ambient::FinSet);
        assert!(is_bunge_pare_equivalence(&j, &triv));
        let one = disc(&Obj::set(1));
        let incl = InternalFunctor::new(one, disc(&Obj::set(2)), map(1, 2, &[1]), map(1, 2, &[1])).unwrap();
        assert!(matches!(classify(&incl, &triv), Verdict::NotLocallySplitWithinBound { .. }));
    }

    #[test]
    fn representable_full_faithfulness_agrees() {
        let probes = discrete_probes(&[Obj::set(1), Obj::set(2)]);
        let j = point_of_codisc();
        assert!(is_representably_fully_faithful(&j, &probes));
        let d2 = disc(&Obj::set(2));
        let one = disc(&Obj::set(1));
        let bang = InternalFunctor::new(d2, one, map(2, 1, &[0, 0]), map(2, 1, &[0, 0])).unwrap();
        assert!(!is_representably_fully_faithful(&bang, &probes));
    }
}
