//! Anafunctors: spans `X ← X[U] → Y` whose left leg is a base change
//! along a cover.

use serde::{Serialize, Serializer};

use crate::ambient::{comp, pullback, Arr};
use crate::error::{Error, Result};
use crate::internal::{BaseChange, Cat, InternalFunctor, NaturalTransformation};
use crate::report::Violation;
use crate::sites::Pretopology;

/// An anafunctor `(U, f): X ⇸ Y`: a cover `u: U → X₀` and a functor
/// `f: X[U] → Y`.
#[derive(Debug, Clone)]
pub struct Anafunctor {
    src: Cat,
    tgt: Cat,
    cover: Arr,
    base_change: BaseChange,
    functor: InternalFunctor,
}

impl PartialEq for Anafunctor {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.cover == other.cover && self.functor == other.functor
    }
}

impl Eq for Anafunctor {}

impl Serialize for Anafunctor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Anafunctor", 3)?;
        st.serialize_field("cover", &self.cover)?;
        st.serialize_field("object_map", self.functor.f0())?;
        st.serialize_field("arrow_map", self.functor.f1())?;
        st.end()
    }
}

impl Anafunctor {
    /// Checks the cover against `j` and the functor's domain and laws.
    pub fn new(src: Cat, tgt: Cat, cover: Arr, functor: InternalFunctor, j: &Pretopology) -> Result<Self> {
        if !j.contains(&cover) {
            return Err(Error::Invalid(format!("cover {:?} is not in {}", cover.table(), j.name())));
        }
        let a = Self::assemble(src, tgt, cover, functor)?;
        a.functor.validate()?;
        Ok(a)
    }

    /// Shape checks only; membership of the cover is the caller's concern.
    pub fn assemble(src: Cat, tgt: Cat, cover: Arr, functor: InternalFunctor) -> Result<Self> {
        let base_change = BaseChange::new(&src, &cover)?;
        if functor.dom() != base_change.cat() {
            return Err(Error::DomainMismatch("functor is not defined on the base change along the cover".into()));
        }
        if functor.cod() != &tgt {
            return Err(Error::DomainMismatch("functor does not land in the target category".into()));
        }
        Ok(Self { src, tgt, cover, base_change, functor })
    }

    /// `(X₀, f)`: the cover is the identity, so `X[X₀] = X`.
    pub fn from_functor(f: &InternalFunctor) -> Self {
        Self::assemble(f.dom().clone(), f.cod().clone(), Arr::identity(f.dom().obj()), f.clone())
            .expect("identity base change")
    }

    pub fn identity(x: &Cat) -> Self {
        Self::from_functor(&InternalFunctor::identity(x))
    }

    pub fn src(&self) -> &Cat {
        &self.src
    }

    pub fn tgt(&self) -> &Cat {
        &self.tgt
    }

    pub fn cover(&self) -> &Arr {
        &self.cover
    }

    pub fn functor(&self) -> &InternalFunctor {
        &self.functor
    }

    pub fn base_change(&self) -> &BaseChange {
        &self.base_change
    }

    /// `f₀(a)` for a point `a` of the cover.
    #[inline]
    pub fn on_object(&self, a: usize) -> usize {
        self.functor.f0().at(a)
    }

    /// `f₁` of the arrow `(a₁, a₂, x)` of `X[U]`.
    pub fn on_arrow(&self, a1: usize, a2: usize, x: usize) -> Option<usize> {
        self.base_change.locate(a1, a2, x).map(|z| self.functor.f1().at(z))
    }

    /// Whether this is the image of a functor, i.e. its cover is an
    /// identity.
    pub fn is_functor_image(&self) -> bool {
        self.cover.is_identity()
    }

    pub fn validate(&self, j: &Pretopology) -> Result<(), Violation> {
        if !j.contains(&self.cover) {
            return Err(Violation::new("cover is not in the pretopology", self.cover.table()));
        }
        self.functor.validate()
    }
}

/// `G ∘ F` for `F = (U, f): X ⇸ Y` and `G = (V, g): Y ⇸ Z`: cover
/// `U ×_{Y₀} V → U → X₀` and functor `g ∘ f^V`.
pub fn compose_ana(f: &Anafunctor, g: &Anafunctor) -> Result<Anafunctor> {
    if f.tgt != g.src {
        return Err(Error::DomainMismatch("anafunctors do not share the middle category".into()));
    }
    let apex = pullback(f.functor.f0(), &g.cover)?;
    let cover = comp(&f.cover, &apex.proj1);
    let bc = BaseChange::new(&f.src, &cover)?;
    let f0 = comp(g.functor.f0(), &apex.proj2);
    let mut table = Vec::with_capacity(bc.cat().arr().size());
    for z in bc.cat().arr().elements() {
        let (w1, w2, x) = bc.components(z);
        let (u1, v1) = apex.components(w1);
        let (u2, v2) = apex.components(w2);
        let y = f.on_arrow(u1, u2, x).expect("arrow over the cover");
        table.push(g.on_arrow(v1, v2, y).expect("pulled-back arrow lies over V"));
    }
    let f1 = Arr::new(bc.cat().arr().clone(), g.functor.f1().cod().clone(), table)?;
    let functor = InternalFunctor::assemble(bc.cat().clone(), g.tgt.clone(), f0, f1)?;
    Ok(Anafunctor { src: f.src.clone(), tgt: g.tgt.clone(), cover, base_change: bc, functor })
}

/// The functor `X[V] → X[U]` induced by `k: V → U` over `X₀`.
pub fn induced_functor(a: &Anafunctor, k: &Arr, v_cover: &Arr) -> Result<InternalFunctor> {
    if k.cod() != a.cover.dom() || comp(&a.cover, k) != *v_cover {
        return Err(Error::Invalid("refinement does not commute with the covers".into()));
    }
    let from = BaseChange::new(&a.src, v_cover)?;
    let table = from
        .cat()
        .arr()
        .elements()
        .map(|z| {
            let (v1, v2, x) = from.components(z);
            a.base_change.locate(k.at(v1), k.at(v2), x).expect("same underlying arrow")
        })
        .collect();
    let f1 = Arr::new(from.cat().arr().clone(), a.base_change.cat().arr().clone(), table)?;
    InternalFunctor::assemble(from.cat().clone(), a.base_change.cat().clone(), k.clone(), f1)
}

/// The image of a natural transformation, on identity covers.
pub fn alpha_transformation(a: &NaturalTransformation) -> super::AnaTransformation {
    let f = Anafunctor::from_functor(a.src());
    let g = Anafunctor::from_functor(a.tgt());
    super::AnaTransformation::assemble(f, g, a.component().clone()).expect("identity covers")
}
