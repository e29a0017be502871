//! Internal functors and natural transformations.

use serde::Serialize;
use serde_json::json;

use super::category::Cat;
use crate::ambient::{comp, Arr};
use crate::error::{Error, Result};
use crate::report::{ensure, Violation};

/// A functor between internal categories: an object map and an arrow map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InternalFunctor {
    dom: Cat,
    cod: Cat,
    f0: Arr,
    f1: Arr,
}

impl InternalFunctor {
    /// Shape check plus [`validate`](Self::validate).
    pub fn new(dom: Cat, cod: Cat, f0: Arr, f1: Arr) -> Result<Self> {
        let f = Self::assemble(dom, cod, f0, f1)?;
        f.validate()?;
        Ok(f)
    }

    pub fn assemble(dom: Cat, cod: Cat, f0: Arr, f1: Arr) -> Result<Self> {
        if f0.dom() != dom.obj() || f0.cod() != cod.obj() {
            return Err(Error::DomainMismatch("object component has the wrong ends".into()));
        }
        if f1.dom() != dom.arr() || f1.cod() != cod.arr() {
            return Err(Error::DomainMismatch("arrow component has the wrong ends".into()));
        }
        Ok(Self { dom, cod, f0, f1 })
    }

    pub fn identity(cat: &Cat) -> Self {
        Self {
            dom: cat.clone(),
            cod: cat.clone(),
            f0: Arr::identity(cat.obj()),
            f1: Arr::identity(cat.arr()),
        }
    }

    /// `g ∘ f`.
    pub fn compose(g: &InternalFunctor, f: &InternalFunctor) -> Result<Self> {
        if f.cod != g.dom {
            return Err(Error::DomainMismatch("functors are not composable".into()));
        }
        Ok(Self { dom: f.dom.clone(), cod: g.cod.clone(), f0: comp(&g.f0, &f.f0), f1: comp(&g.f1, &f.f1) })
    }

    pub fn then(&self, g: &InternalFunctor) -> Result<Self> {
        Self::compose(g, self)
    }

    pub fn dom(&self) -> &Cat {
        &self.dom
    }

    pub fn cod(&self) -> &Cat {
        &self.cod
    }

    pub fn f0(&self) -> &Arr {
        &self.f0
    }

    pub fn f1(&self) -> &Arr {
        &self.f1
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.f0.is_identity() && self.f1.is_identity()
    }

    /// Compatibility with sources, targets, units and composition.
    pub fn validate(&self) -> Result<(), Violation> {
        let (x, y) = (&self.dom, &self.cod);
        for g in x.arr().elements() {
            let fg = self.f1.at(g);
            ensure(y.s(fg) == self.f0.at(x.s(g)) && y.t(fg) == self.f0.at(x.t(g)), || {
                Violation::new("arrow component does not commute with source/target", json!({"arrow": g}))
            })?;
        }
        for o in x.obj().elements() {
            ensure(self.f1.at(x.e(o)) == y.e(self.f0.at(o)), || {
                Violation::new("units are not preserved", json!({"object": o}))
            })?;
        }
        for z in 0..x.composable().len() {
            let (g, f) = x.composable().components(z);
            let lhs = self.f1.at(x.mul().at(z));
            ensure(y.try_m(self.f1.at(g), self.f1.at(f)) == Some(lhs), || {
                Violation::new("composition is not preserved", json!({"g": g, "f": f}))
            })?;
        }
        Ok(())
    }
}

/// A natural transformation `a: f ⇒ g` with component `a: X₀ → Y₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalTransformation {
    src: InternalFunctor,
    tgt: InternalFunctor,
    comp: Arr,
}

impl NaturalTransformation {
    pub fn new(src: InternalFunctor, tgt: InternalFunctor, comp: Arr) -> Result<Self> {
        let a = Self::assemble(src, tgt, comp)?;
        a.validate()?;
        Ok(a)
    }

    pub fn assemble(src: InternalFunctor, tgt: InternalFunctor, comp: Arr) -> Result<Self> {
        if src.dom != tgt.dom || src.cod != tgt.cod {
            return Err(Error::DomainMismatch("transformation between non-parallel functors".into()));
        }
        if comp.dom() != src.dom.obj() || comp.cod() != src.cod.arr() {
            return Err(Error::DomainMismatch("component has the wrong ends".into()));
        }
        Ok(Self { src, tgt, comp })
    }

    pub fn identity(f: &InternalFunctor) -> Self {
        Self { src: f.clone(), tgt: f.clone(), comp: comp(f.cod.unit(), &f.f0) }
    }

    pub fn src(&self) -> &InternalFunctor {
        &self.src
    }

    pub fn tgt(&self) -> &InternalFunctor {
        &self.tgt
    }

    pub fn component(&self) -> &Arr {
        &self.comp
    }

    #[inline]
    pub fn at(&self, x: usize) -> usize {
        self.comp.at(x)
    }

    /// Endpoints `s ∘ a = f₀`, `t ∘ a = g₀` and the naturality square
    /// `g₁(x) ∘ a(s x) = a(t x) ∘ f₁(x)` for every arrow `x`.
    pub fn validate(&self) -> Result<(), Violation> {
        let (x, y) = (self.src.dom.as_ref(), self.src.cod.as_ref());
        let (f, g) = (&self.src, &self.tgt);
        for o in x.obj().elements() {
            let c = self.comp.at(o);
            ensure(y.s(c) == f.f0.at(o) && y.t(c) == g.f0.at(o), || {
                Violation::new("component has the wrong endpoints", json!({"object": o, "component": c}))
            })?;
        }
        for h in x.arr().elements() {
            let lhs = y.m(g.f1.at(h), self.comp.at(x.s(h)));
            let rhs = y.m(self.comp.at(x.t(h)), f.f1.at(h));
            ensure(lhs == rhs, || Violation::new("naturality square does not commute", json!({"arrow": h})))?;
        }
        Ok(())
    }

    /// `b · a` for `a: f ⇒ g` and `b: g ⇒ h`.
    pub fn vcomp(a: &Self, b: &Self) -> Result<Self> {
        if a.tgt != b.src {
            return Err(Error::DomainMismatch("transformations do not share the middle functor".into()));
        }
        let y = &a.src.cod;
        let table = a.src.dom.obj().elements().map(|o| y.m(b.at(o), a.at(o))).collect();
        let c = Arr::new(a.comp.dom().clone(), y.arr().clone(), table)?;
        Ok(Self { src: a.src.clone(), tgt: b.tgt.clone(), comp: c })
    }

    /// `a k: f k ⇒ g k`.
    pub fn whisker_functor_after(&self, k: &InternalFunctor) -> Result<Self> {
        let src = InternalFunctor::compose(&self.src, k)?;
        let tgt = InternalFunctor::compose(&self.tgt, k)?;
        Ok(Self { src, tgt, comp: comp(&self.comp, &k.f0) })
    }

    /// `h a: h f ⇒ h g`.
    pub fn whisker_functor_before(&self, h: &InternalFunctor) -> Result<Self> {
        let src = InternalFunctor::compose(h, &self.src)?;
        let tgt = InternalFunctor::compose(h, &self.tgt)?;
        Ok(Self { src, tgt, comp: comp(&h.f1, &self.comp) })
    }

    /// `b * a = (b g) · (h' a)`... computed as `(b f') · (h a)` for
    /// `a: f ⇒ f'` and `b: h ⇒ h'`.
    pub fn hcomp(a: &Self, b: &Self) -> Result<Self> {
        let ha = a.whisker_functor_before(&b.src)?;
        let bf = b.whisker_functor_after(&a.tgt)?;
        Self::vcomp(&ha, &bf)
    }

    pub fn is_iso(&self) -> bool {
        let y = &self.src.cod;
        self.comp.table().iter().all(|&c| y.inverse_of(c).is_some())
    }

    /// The inverse transformation `g ⇒ f`.
    pub fn invert(&self) -> Result<Self> {
        let y = &self.src.cod;
        let table: Option<Vec<usize>> = self.comp.table().iter().map(|&c| y.inverse_of(c)).collect();
        let table = table.ok_or(Error::NotInvertible)?;
        let c = Arr::new(self.comp.dom().clone(), y.arr().clone(), table)?;
        Ok(Self { src: self.tgt.clone(), tgt: self.src.clone(), comp: c })
    }
}
