//! Transformations between anafunctors and their compositions.

use serde::Serialize;
use serde_json::json;

use super::anafunctor::{compose_ana, induced_functor, Anafunctor};
use crate::ambient::{comp, descend, for_each_choice, lift, pullback, Arr, PullbackResult};
use crate::error::{Error, Result};
use crate::internal::InternalFunctor;
use crate::report::{ensure, Violation};

/// A transformation `(U, f) ⇒ (V, g)` with component
/// `a: U ×_{X₀} V → Y₁`, `a(p, q): f₀ p → g₀ q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnaTransformation {
    #[serde(skip)]
    src: Anafunctor,
    #[serde(skip)]
    tgt: Anafunctor,
    #[serde(skip)]
    domain: PullbackResult,
    comp: Arr,
}

impl AnaTransformation {
    pub fn new(src: Anafunctor, tgt: Anafunctor, comp: Arr) -> Result<Self> {
        let a = Self::assemble(src, tgt, comp)?;
        a.validate()?;
        Ok(a)
    }

    pub fn assemble(src: Anafunctor, tgt: Anafunctor, comp: Arr) -> Result<Self> {
        if src.src() != tgt.src() || src.tgt() != tgt.tgt() {
            return Err(Error::DomainMismatch("transformation between non-parallel anafunctors".into()));
        }
        let domain = pullback(src.cover(), tgt.cover())?;
        if comp.dom() != &domain.apex || comp.cod() != src.tgt().arr() {
            return Err(Error::DomainMismatch("component has the wrong ends".into()));
        }
        Ok(Self { src, tgt, domain, comp })
    }

    /// Builds the component from a rule on pairs `(p, q)` of cover points.
    pub fn from_rule(src: Anafunctor, tgt: Anafunctor, rule: impl Fn(usize, usize) -> Result<usize>) -> Result<Self> {
        let domain = pullback(src.cover(), tgt.cover())?;
        let table = (0..domain.len())
            .map(|z| {
                let (p, q) = domain.components(z);
                rule(p, q)
            })
            .collect::<Result<Vec<_>>>()?;
        let comp = Arr::new(domain.apex.clone(), src.tgt().arr().clone(), table)?;
        Self::new(src, tgt, comp)
    }

    pub fn src(&self) -> &Anafunctor {
        &self.src
    }

    pub fn tgt(&self) -> &Anafunctor {
        &self.tgt
    }

    pub fn component(&self) -> &Arr {
        &self.comp
    }

    /// `U ×_{X₀} V`.
    pub fn domain(&self) -> &PullbackResult {
        &self.domain
    }

    /// `a(p, q)`; panics unless `p` and `q` lie over the same object.
    pub fn at(&self, p: usize, q: usize) -> usize {
        self.comp.at(self.domain.pair(p, q))
    }

    /// Endpoints, then naturality over every arrow of `X[U ×_{X₀} V]`:
    /// `g(q₁, q₂, x) ∘ a(p₁, q₁) = a(p₂, q₂) ∘ f(p₁, p₂, x)`.
    pub fn validate(&self) -> Result<(), Violation> {
        let (x, y) = (self.src.src(), self.src.tgt());
        let (f, g) = (&self.src, &self.tgt);
        for z in 0..self.domain.len() {
            let (p, q) = self.domain.components(z);
            let c = self.comp.at(z);
            ensure(y.s(c) == f.on_object(p) && y.t(c) == g.on_object(q), || {
                Violation::new("component has the wrong endpoints", json!({"pair": [p, q], "component": c}))
            })?;
        }
        let over = comp(self.src.cover(), &self.domain.proj1);
        for z1 in 0..self.domain.len() {
            let (p1, q1) = self.domain.components(z1);
            for z2 in 0..self.domain.len() {
                let (p2, q2) = self.domain.components(z2);
                for &h in x.hom(over.at(z1), over.at(z2)) {
                    let fh = f.on_arrow(p1, p2, h).expect("arrow over the cover");
                    let gh = g.on_arrow(q1, q2, h).expect("arrow over the cover");
                    ensure(y.m(gh, self.comp.at(z1)) == y.m(self.comp.at(z2), fh), || {
                        Violation::new(
                            "naturality square does not commute",
                            json!({"from": [p1, q1], "to": [p2, q2], "arrow": h}),
                        )
                    })?;
                }
            }
        }
        Ok(())
    }

    pub fn is_iso(&self) -> bool {
        let y = self.src.tgt();
        self.comp.table().iter().all(|&c| y.inverse_of(c).is_some())
    }

    /// Validates and requires every component to be invertible.
    pub fn validate_iso(&self) -> Result<(), Violation> {
        self.validate()?;
        let y = self.src.tgt();
        match self.comp.table().iter().position(|&c| y.inverse_of(c).is_none()) {
            None => Ok(()),
            Some(z) => Err(Violation::new(
                "component is not invertible",
                json!({"pair": self.domain.components(z), "component": self.comp.at(z)}),
            )),
        }
    }

    /// The inverse `(V, g) ⇒ (U, f)`.
    pub fn invert(&self) -> Result<Self> {
        let y = self.src.tgt().clone();
        Self::from_rule(self.tgt.clone(), self.src.clone(), |q, p| {
            y.inverse_of(self.at(p, q)).ok_or(Error::NotInvertible)
        })
    }
}

/// `1_{(U,f)}`, with component `(p₁, p₂) ↦ f(p₁, p₂, e(u p₁))`.
pub fn identity_transformation(f: &Anafunctor) -> AnaTransformation {
    let x = f.src().clone();
    let u = f.cover().clone();
    AnaTransformation::from_rule(f.clone(), f.clone(), |p1, p2| {
        f.on_arrow(p1, p2, x.e(u.at(p1))).ok_or(Error::Invalid("cover points over different objects".into()))
    })
    .expect("identity transformation is natural")
}

/// The renaming transformation `(U, f) ⇒ (V, f ∘ k̂)` of a refinement
/// `k: V → U` over `X₀`; the new cover is `u ∘ k`.
pub fn renaming(f: &Anafunctor, k: &Arr) -> Result<AnaTransformation> {
    let v = comp(f.cover(), k);
    let khat = induced_functor(f, k, &v)?;
    let g_functor = InternalFunctor::compose(f.functor(), &khat)?;
    let g = Anafunctor::assemble(f.src().clone(), f.tgt().clone(), v, g_functor)?;
    renaming_between(f, &g, k)
}

/// The renaming transformation `(U, f) ⇒ (V, g)`, after checking that
/// `u ∘ k = v` and `g = f ∘ k̂`.
pub fn renaming_between(f: &Anafunctor, g: &Anafunctor, k: &Arr) -> Result<AnaTransformation> {
    let khat = induced_functor(f, k, g.cover())?;
    if InternalFunctor::compose(f.functor(), &khat)? != *g.functor() {
        return Err(Error::Invalid("target functor is not the restriction along the refinement".into()));
    }
    let x = f.src().clone();
    let u = f.cover().clone();
    AnaTransformation::from_rule(f.clone(), g.clone(), |p, q| {
        f.on_arrow(p, k.at(q), x.e(u.at(p))).ok_or(Error::Invalid("refinement leaves the fiber".into()))
    })
}

/// The left-associated triple product `(U ×_{X₀} V) ×_{X₀} W` and its
/// projection onto `U ×_{X₀} W`.
struct Triple {
    apex: PullbackResult,
    uv: PullbackResult,
    uw: PullbackResult,
    to_uw: Arr,
}

fn triple(a: &AnaTransformation, b: &AnaTransformation) -> Result<Triple> {
    let uv = a.domain.clone();
    let over = comp(a.src.cover(), &uv.proj1);
    let apex = pullback(&over, b.tgt.cover())?;
    let uw = pullback(a.src.cover(), b.tgt.cover())?;
    let table = (0..apex.len())
        .map(|t| {
            let (pq, r) = apex.components(t);
            uw.pair(uv.components(pq).0, r)
        })
        .collect();
    let to_uw = Arr::new(apex.apex.clone(), uw.apex.clone(), table)?;
    Ok(Triple { apex, uv, uw, to_uw })
}

/// `b̃a(p, q, r) = b(q, r) ∘ a(p, q)` on the triple product.
fn composite_on_triples(a: &AnaTransformation, b: &AnaTransformation, tr: &Triple) -> Result<Arr> {
    let y = a.src.tgt();
    let table = (0..tr.apex.len())
        .map(|t| {
            let (pq, r) = tr.apex.components(t);
            let (p, q) = tr.uv.components(pq);
            y.try_m(b.at(q, r), a.at(p, q))
                .ok_or_else(|| Error::Invalid(format!("components at ({p}, {q}, {r}) are not composable")))
        })
        .collect::<Result<Vec<_>>>()?;
    Arr::new(tr.apex.apex.clone(), y.arr().clone(), table)
}

/// `b · a`: the composite `b̃a` on `U ×_{X₀} V ×_{X₀} W` is checked to be
/// constant on the fibers of the projection to `U ×_{X₀} W` and then
/// descended along it. When the projection has a section the restriction
/// along it is computed as well and must agree.
pub fn vcomp(a: &AnaTransformation, b: &AnaTransformation) -> Result<AnaTransformation> {
    if a.tgt != b.src {
        return Err(Error::DomainMismatch("transformations do not share the middle anafunctor".into()));
    }
    let tr = triple(a, b)?;
    let ba = composite_on_triples(a, b, &tr)?;
    let c = descend(&tr.to_uw, &ba)?;
    if let Some(section) = lift(&Arr::identity(&tr.uw.apex), &tr.to_uw) {
        if comp(&ba, &section) != c {
            return Err(Error::Invalid("section shortcut disagrees with descent".into()));
        }
    }
    Ok(AnaTransformation::new(a.src.clone(), b.tgt.clone(), c)?)
}

/// All components `c` on `U ×_{X₀} W` with `c ∘ π = b̃a`, found by running
/// through every table `U ×_{X₀} W → Y₁`. Used as an oracle for
/// [`vcomp`]; returns `None` when there are more than `limit` tables.
pub fn vcomp_candidates(a: &AnaTransformation, b: &AnaTransformation, limit: usize) -> Option<Vec<Vec<usize>>> {
    let tr = triple(a, b).ok()?;
    let ba = composite_on_triples(a, b, &tr).ok()?;
    let n = tr.uw.len();
    let m = a.src.tgt().arr().size();
    let total = (m as u128).checked_pow(n as u32)?;
    if total > limit as u128 {
        return None;
    }
    let mut out = Vec::new();
    if m == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return Some(out);
    }
    let mut cand = vec![0usize; n];
    loop {
        if tr.apex.apex.elements().all(|t| cand[tr.to_uw.at(t)] == ba.at(t)) {
            out.push(cand.clone());
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Some(out);
            }
            cand[i] += 1;
            if cand[i] < m {
                break;
            }
            cand[i] = 0;
            i += 1;
        }
    }
}

/// All transformations `F ⇒ G`, searching each component `a(p, q)` in the
/// hom-set from `f₀ p` to `g₀ q`; `None` when the search exceeds `limit`.
pub fn ana_transformations(f: &Anafunctor, g: &Anafunctor, limit: usize) -> Option<Vec<AnaTransformation>> {
    let domain = pullback(f.cover(), g.cover()).ok()?;
    let y = f.tgt();
    let options: Vec<Vec<usize>> = (0..domain.len())
        .map(|z| {
            let (p, q) = domain.components(z);
            y.hom(f.on_object(p), g.on_object(q)).to_vec()
        })
        .collect();
    let mut out = Vec::new();
    let within = for_each_choice(&options, limit, |t| {
        if let Ok(c) = Arr::new(domain.apex.clone(), y.arr().clone(), t.to_vec()) {
            if let Ok(a) = AnaTransformation::new(f.clone(), g.clone(), c) {
                out.push(a);
            }
        }
        true
    });
    within.then_some(out)
}

/// `H a: H F ⇒ H G` for `a: F ⇒ G` and `H = (W, h)` after them, with
/// component `((p, w₁), (q, w₂)) ↦ h(w₁, w₂, a(p, q))`.
pub fn whisker_after(a: &AnaTransformation, h: &Anafunctor) -> Result<AnaTransformation> {
    let hf = compose_ana(&a.src, h)?;
    let hg = compose_ana(&a.tgt, h)?;
    let fw = pullback(a.src.functor().f0(), h.cover())?;
    let gw = pullback(a.tgt.functor().f0(), h.cover())?;
    AnaTransformation::from_rule(hf, hg, |l, r| {
        let (p, w1) = fw.components(l);
        let (q, w2) = gw.components(r);
        h.on_arrow(w1, w2, a.at(p, q)).ok_or(Error::Invalid("component leaves the cover of H".into()))
    })
}

fn not_composable(p: usize, q: usize) -> Error {
    Error::Invalid(format!("component at ({p}, {q}) does not run between the functor values"))
}

/// `a K: F K ⇒ G K` for `a: F ⇒ G` and `K = (W, k)` before them.
///
/// At `((w₁, p), (w₂, q))` the arrow `y = k(w₁, w₂, e)` runs from `u p` to
/// `v q`; it is routed through an auxiliary point `p'` of `U` over `v q`
/// as `a(p', q) ∘ f(p, p', y)` (or through a point of `V` over `u p`).
pub fn whisker_before(a: &AnaTransformation, k: &Anafunctor) -> Result<AnaTransformation> {
    let fk = compose_ana(k, &a.src)?;
    let gk = compose_ana(k, &a.tgt)?;
    let wf = pullback(k.functor().f0(), a.src.cover())?;
    let wg = pullback(k.functor().f0(), a.tgt.cover())?;
    let y = a.src.tgt();
    let (f, g) = (&a.src, &a.tgt);
    let w0 = k.src().clone();
    AnaTransformation::from_rule(fk, gk, |l, r| {
        let (w1, p) = wf.components(l);
        let (w2, q) = wg.components(r);
        let arrow = k.on_arrow(w1, w2, w0.e(k.cover().at(w1))).expect("same fiber");
        let target = g.cover().at(q);
        if let Some(p1) = f.cover().fiber(target).next() {
            let fy = f.on_arrow(p, p1, arrow).expect("arrow over the cover");
            return y.try_m(a.at(p1, q), fy).ok_or_else(|| not_composable(p1, q));
        }
        if let Some(q1) = g.cover().fiber(f.cover().at(p)).next() {
            let gy = g.on_arrow(q1, q, arrow).expect("arrow over the cover");
            return y.try_m(gy, a.at(p, q1)).ok_or_else(|| not_composable(p, q1));
        }
        Err(Error::NotFoundWithinBound { what: "auxiliary cover point".into(), bound: 0 })
    })
}

/// Horizontal composite `b * a: G F ⇒ G' F'` for `a: F ⇒ F'` and
/// `b: G ⇒ G'`, computed as `(G' a) · (b F)`.
pub fn hcomp(a: &AnaTransformation, b: &AnaTransformation) -> Result<AnaTransformation> {
    let bf = whisker_before(b, &a.src)?;
    let ga = whisker_after(a, &b.tgt)?;
    vcomp(&bf, &ga)
}
