//! Discrete, codiscrete and Čech categories, base change and strict
//! pullbacks.

use std::sync::Arc;

use super::category::{Cat, InternalCategory};
use super::functor::InternalFunctor;
use crate::ambient::{comp, product, product_arrow, pullback, Arr, Obj, PullbackResult};
use crate::error::{Error, Result};

/// Every structure map is the identity of `a`.
pub fn disc(a: &Obj) -> Cat {
    let id = Arr::identity(a);
    let cat = InternalCategory::with_composition(a.clone(), a.clone(), id.clone(), id.clone(), id, |g, _| g)
        .expect("discrete category");
    Arc::new(cat)
}

/// The groupoid with exactly one arrow `(a, b): a → b` between any two
/// objects; the Čech groupoid of `a → 1`.
pub fn codisc(a: &Obj) -> Cat {
    cech(&Arr::to_terminal(a))
}

/// The kernel-pair groupoid of `f`: objects `dom f`, arrows the pairs
/// `(a, b)` with `f a = f b`, read as `a → b`.
pub fn cech(f: &Arr) -> Cat {
    let kp = pullback(f, f).expect("kernel pair");
    let unit = kp.mediate(&Arr::identity(f.dom()), &Arr::identity(f.dom())).expect("diagonal");
    let cat = InternalCategory::with_composition(
        f.dom().clone(),
        kp.apex.clone(),
        kp.proj1.clone(),
        kp.proj2.clone(),
        unit,
        |g, h| {
            let (_, c) = kp.components(g);
            let (a, _) = kp.components(h);
            kp.pair(a, c)
        },
    )
    .expect("Čech groupoid");
    Arc::new(cat)
}

/// `X[M]` for `p: M → X₀` together with the data needed to read its arrows
/// as triples `(m₁, m₂, x)` with `x: p m₁ → p m₂`.
///
/// Along an identity the base change is `X` itself.
#[derive(Debug, Clone)]
pub struct BaseChange {
    base: Cat,
    along: Arr,
    cat: Cat,
    /// `M × M` and the arrows pullback `M² ×_{X₀²} X₁`; absent along
    /// identities.
    chosen: Option<(PullbackResult, PullbackResult)>,
}

impl BaseChange {
    pub fn new(x: &Cat, p: &Arr) -> Result<Self> {
        if p.cod() != x.obj() {
            return Err(Error::DomainMismatch("base change along an arrow not into the objects".into()));
        }
        if p.is_identity() {
            return Ok(Self { base: x.clone(), along: p.clone(), cat: x.clone(), chosen: None });
        }
        let m = p.dom();
        let mm = product(m, m)?;
        let pp = product_arrow(p, p)?;
        let (_, st) = x.source_target();
        let arrows = pullback(&pp, &st)?;
        let src = comp(&mm.proj1, &arrows.proj1);
        let tgt = comp(&mm.proj2, &arrows.proj1);
        let diag = mm.mediate(&Arr::identity(m), &Arr::identity(m))?;
        let unit = arrows.mediate(&diag, &comp(x.unit(), p))?;
        let mul = {
            let composable = pullback(&src, &tgt)?;
            let table = (0..composable.len())
                .map(|z| {
                    let (g, f) = composable.components(z);
                    let (gm, gx) = arrows.components(g);
                    let (fm, fx) = arrows.components(f);
                    let (m1, _) = mm.components(fm);
                    let (_, m3) = mm.components(gm);
                    arrows.pair(mm.pair(m1, m3), x.m(gx, fx))
                })
                .collect();
            Arr::new(composable.apex.clone(), arrows.apex.clone(), table)?
        };
        let cat = InternalCategory::assemble(m.clone(), arrows.apex.clone(), src, tgt, unit, mul)?;
        Ok(Self { base: x.clone(), along: p.clone(), cat: Arc::new(cat), chosen: Some((mm, arrows)) })
    }

    pub fn cat(&self) -> &Cat {
        &self.cat
    }

    pub fn base(&self) -> &Cat {
        &self.base
    }

    pub fn along(&self) -> &Arr {
        &self.along
    }

    /// The arrow of `X[M]` as `(m₁, m₂, x)`.
    pub fn components(&self, z: usize) -> (usize, usize, usize) {
        match &self.chosen {
            None => (self.base.s(z), self.base.t(z), z),
            Some((mm, arrows)) => {
                let (pair, x) = arrows.components(z);
                let (m1, m2) = mm.components(pair);
                (m1, m2, x)
            }
        }
    }

    /// The arrow `(m₁, m₂, x)`, if `x: p m₁ → p m₂`.
    pub fn locate(&self, m1: usize, m2: usize, x: usize) -> Option<usize> {
        match &self.chosen {
            None => (self.base.s(x) == m1 && self.base.t(x) == m2).then_some(x),
            Some((mm, arrows)) => arrows.locate(mm.locate(m1, m2)?, x),
        }
    }

    /// The arrow component of the projection `X[M] → X`.
    pub fn arrow_projection(&self) -> Arr {
        match &self.chosen {
            None => Arr::identity(self.base.arr()),
            Some((_, arrows)) => arrows.proj2.clone(),
        }
    }

    /// The projection functor `X[M] → X`, with object component `p`.
    pub fn projection(&self) -> InternalFunctor {
        InternalFunctor::assemble(self.cat.clone(), self.base.clone(), self.along.clone(), self.arrow_projection())
            .expect("projection has the right ends")
    }
}

pub fn base_change(x: &Cat, p: &Arr) -> Result<Cat> {
    Ok(BaseChange::new(x, p)?.cat)
}

/// The canonical isomorphism `X[M][N] → X[N]` (base change along `p ∘ q`),
/// identity on objects.
pub fn base_change_coherence(x: &Cat, q: &Arr, p: &Arr) -> Result<InternalFunctor> {
    let outer = BaseChange::new(x, p)?;
    let twice = BaseChange::new(outer.cat(), q)?;
    let direct = BaseChange::new(x, &p.after(q)?)?;
    let table = (0..twice.cat().arr().size())
        .map(|z| {
            let (n1, n2, y) = twice.components(z);
            let (_, _, a) = outer.components(y);
            direct.locate(n1, n2, a).expect("same underlying arrow")
        })
        .collect();
    let f1 = Arr::new(twice.cat().arr().clone(), direct.cat().arr().clone(), table)?;
    InternalFunctor::new(twice.cat().clone(), direct.cat().clone(), Arr::identity(q.dom()), f1)
}

/// The componentwise pullback of internal functors `f: X → Z ← Y: g`.
#[derive(Debug, Clone)]
pub struct StrictPullback {
    pub cat: Cat,
    pub proj1: InternalFunctor,
    pub proj2: InternalFunctor,
    pub objects: PullbackResult,
    pub arrows: PullbackResult,
}

pub fn strict_pullback(f: &InternalFunctor, g: &InternalFunctor) -> Result<StrictPullback> {
    if f.cod() != g.cod() {
        return Err(Error::DomainMismatch("strict pullback of functors with different codomains".into()));
    }
    let (x, y) = (f.dom(), g.dom());
    let objects = pullback(f.f0(), g.f0())?;
    let arrows = pullback(f.f1(), g.f1())?;
    let src = objects.mediate(&comp(x.src(), &arrows.proj1), &comp(y.src(), &arrows.proj2))?;
    let tgt = objects.mediate(&comp(x.tgt(), &arrows.proj1), &comp(y.tgt(), &arrows.proj2))?;
    let unit = arrows.mediate(&comp(x.unit(), &objects.proj1), &comp(y.unit(), &objects.proj2))?;
    let composable = pullback(&src, &tgt)?;
    let table = (0..composable.len())
        .map(|z| {
            let (b, a) = composable.components(z);
            let (b1, b2) = arrows.components(b);
            let (a1, a2) = arrows.components(a);
            arrows.pair(x.m(b1, a1), y.m(b2, a2))
        })
        .collect();
    let mul = Arr::new(composable.apex.clone(), arrows.apex.clone(), table)?;
    let cat = Arc::new(InternalCategory::assemble(
        objects.apex.clone(),
        arrows.apex.clone(),
        src,
        tgt,
        unit,
        mul,
    )?);
    let proj1 = InternalFunctor::assemble(cat.clone(), x.clone(), objects.proj1.clone(), arrows.proj1.clone())?;
    let proj2 = InternalFunctor::assemble(cat.clone(), y.clone(), objects.proj2.clone(), arrows.proj2.clone())?;
    Ok(StrictPullback { cat, proj1, proj2, objects, arrows })
}

/// `disc(X₀) → X`: identity on objects, units on arrows.
pub fn from_discrete(x: &Cat) -> InternalFunctor {
    InternalFunctor::assemble(disc(x.obj()), x.clone(), Arr::identity(x.obj()), x.unit().clone())
        .expect("unit map has the right ends")
}

/// `X → codisc(X₀)`: identity on objects, `(s, t)` on arrows.
pub fn to_codiscrete(x: &Cat) -> InternalFunctor {
    let (_, st) = x.source_target();
    let target = codisc(x.obj());
    // the arrows of codisc(X₀) are the chosen product X₀ × X₀
    let f1 = Arr::new(x.arr().clone(), target.arr().clone(), st.table().to_vec()).expect("same product");
    InternalFunctor::assemble(x.clone(), target, Arr::identity(x.obj()), f1).expect("right ends")
}

/// The functor `X → codisc(A)` determined by an object map `X₀ → A`.
pub fn into_codiscrete(x: &Cat, f0: &Arr) -> Result<InternalFunctor> {
    let target = codisc(f0.cod());
    let kp = product(f0.cod(), f0.cod())?;
    let f1 = kp.mediate(&comp(f0, x.src()), &comp(f0, x.tgt()))?;
    let f1 = Arr::new(x.arr().clone(), target.arr().clone(), f1.table().to_vec())?;
    InternalFunctor::new(x.clone(), target, f0.clone(), f1)
}

/// The one-object category whose arrows are the elements of `group`
/// (a FinSet-internal groupoid).
pub fn delooping(group: &crate::instances::FiniteGroup) -> Cat {
    let n = group.order();
    let point = Obj::set(1);
    let arr = Obj::set(n);
    let cat = InternalCategory::with_composition(
        point.clone(),
        arr.clone(),
        Arr::to_terminal(&arr),
        Arr::to_terminal(&arr),
        Arr::new(point, arr, vec![group.identity()]).expect("identity element"),
        |g, f| group.mul(g, f),
    )
    .expect("group axioms");
    Arc::new(cat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::FiniteGroup;

    fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
        Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).unwrap()
    }

    #[test]
    fn discrete_and_codiscrete() {
        let d = disc(&Obj::set(3));
        assert_eq!(d.arr().size(), 3);
        assert!(d.validate_groupoid().is_ok());
        let c = codisc(&Obj::set(3));
        assert_eq!(c.arr().size(), 9);
        assert!(c.validate_groupoid().is_ok());
        let e = codisc(&Obj::set(0));
        assert_eq!(e.arr().size(), 0);
        assert!(e.validate().is_ok());
        // (0,1) then (1,0) composes to the identity at 0
        let c2 = codisc(&Obj::set(2));
        let (a01, a10) = (c2.hom(0, 1)[0], c2.hom(1, 0)[0]);
        assert_eq!(c2.m(a10, a01), c2.e(0));
    }

    #[test]
    fn cech_counts() {
        let c = cech(&map(3, 2, &[0, 0, 1]));
        assert_eq!((c.obj().size(), c.arr().size()), (3, 5));
        assert!(c.validate_groupoid().is_ok());
        assert_eq!(*cech(&Arr::identity(&Obj::set(2))), *disc(&Obj::set(2)));
        assert_eq!(*cech(&Arr::to_terminal(&Obj::set(3))), *codisc(&Obj::set(3)));
    }

    #[test]
    fn base_change_examples() {
        let x = codisc(&Obj::set(2));
        assert_eq!(base_change(&x, &Arr::identity(x.obj())).unwrap(), x);
        let p = map(3, 2, &[0, 0, 1]);
        let xm = base_change(&x, &p).unwrap();
        assert_eq!(xm.arr().size(), 9);
        assert!(xm.validate_groupoid().is_ok());
        let d = disc(&Obj::set(2));
        let dm = base_change(&d, &p).unwrap();
        assert_eq!(dm.arr().size(), 5);
        assert!(dm.validate().is_ok());
        let proj = BaseChange::new(&d, &p).unwrap().projection();
        assert!(proj.validate().is_ok());
    }

    #[test]
    fn coherence_is_an_isomorphism() {
        let x = codisc(&Obj::set(2));
        let p = map(3, 2, &[0, 0, 1]);
        let q = map(4, 3, &[0, 1, 2, 2]);
        let iso = base_change_coherence(&x, &q, &p).unwrap();
        assert_eq!(iso.dom().arr().size(), 16);
        assert_eq!(iso.cod().arr().size(), 16);
        assert!(iso.f0().is_identity() && iso.f1().is_iso());
        let id = Arr::identity(x.obj());
        assert!(base_change_coherence(&x, &id, &id).unwrap().is_identity());
    }

    #[test]
    fn strict_pullbacks() {
        let z = codisc(&Obj::set(2));
        let one = disc(&Obj::set(1));
        let at = |v: usize| into_codiscrete(&one, &map(1, 2, &[v])).unwrap();
        let sp = strict_pullback(&at(0), &at(1)).unwrap();
        assert_eq!(sp.cat.obj().size(), 0);
        assert!(sp.cat.validate().is_ok());
        let y = cech(&map(3, 2, &[0, 0, 1]));
        let g = into_codiscrete(&y, &map(3, 2, &[0, 1, 1])).unwrap();
        let along_id = strict_pullback(&InternalFunctor::identity(&z), &g).unwrap();
        assert_eq!(along_id.cat, y);
        assert!(along_id.proj1.validate().is_ok());
    }

    #[test]
    fn canonical_functors_compose() {
        let x = cech(&map(3, 2, &[0, 0, 1]));
        let f = from_discrete(&x);
        let g = to_codiscrete(&x);
        assert!(f.validate().is_ok() && g.validate().is_ok());
        let h = InternalFunctor::compose(&g, &f).unwrap();
        assert!(h.validate().is_ok());
    }

    #[test]
    fn group_valued_constructions() {
        let z2 = Obj::group(FiniteGroup::cyclic(2));
        let c = codisc(&z2);
        assert_eq!(c.arr().size(), 4);
        assert!(c.validate_groupoid().is_ok());
        let z4 = Obj::group(FiniteGroup::cyclic(4));
        let q = Arr::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let k = cech(&q);
        assert_eq!(k.arr().size(), 8);
        let bc = base_change(&c, &q).unwrap();
        assert_eq!(bc.arr().size(), 16);
        assert!(bc.validate_groupoid().is_ok());
    }
}
