//! Crossed modules of finite groups and their internal groupoids.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use super::FiniteGroup;
use crate::ambient::{Arr, Obj};
use crate::error::{Error, Result};
use crate::internal::{Cat, InternalCategory};
use crate::report::{ensure, VerificationReport, Violation};

/// A homomorphism `t: G → H` with an action of `H` on `G`, stored as
/// `action[h][g]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossedModule {
    pub g: Arc<FiniteGroup>,
    pub h: Arc<FiniteGroup>,
    pub t: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

impl CrossedModule {
    pub fn new(g: FiniteGroup, h: FiniteGroup, t: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        let xm = Self { g: Arc::new(g), h: Arc::new(h), t, action };
        xm.check()?;
        Ok(xm)
    }

    /// `t = id` with the conjugation action.
    pub fn identity(g: FiniteGroup) -> Self {
        let n = g.order();
        let action = (0..n).map(|h| (0..n).map(|x| g.mul(g.mul(h, x), g.inv(h))).collect()).collect();
        Self { g: Arc::new(g.clone()), h: Arc::new(g), t: (0..n).collect(), action }
    }

    /// `t` with `H` acting trivially on `G`.
    pub fn with_trivial_action(g: FiniteGroup, h: FiniteGroup, t: Vec<usize>) -> Result<Self> {
        let action = vec![(0..g.order()).collect(); h.order()];
        Self::new(g, h, t, action)
    }

    #[inline]
    pub fn act(&self, h: usize, g: usize) -> usize {
        self.action[h][g]
    }

    fn shape(&self) -> Result<(), Violation> {
        let (ng, nh) = (self.g.order(), self.h.order());
        ensure(self.t.len() == ng && self.t.iter().all(|&x| x < nh), || {
            Violation::new("t is not a map G → H", &self.t)
        })?;
        ensure(
            self.action.len() == nh && self.action.iter().all(|r| r.len() == ng && r.iter().all(|&x| x < ng)),
            || Violation::new("action is not a map H × G → G", ()),
        )
    }

    /// `t` a homomorphism; `H` acts by automorphisms; `t` equivariant for
    /// conjugation; the Peiffer identity.
    pub fn validate(&self) -> Result<(), Violation> {
        self.shape()?;
        let (g, h) = (&*self.g, &*self.h);
        ensure(g.is_hom(h, &self.t), || Violation::new("t is not a homomorphism", &self.t))?;
        for a in 0..h.order() {
            ensure(g.is_hom(g, &self.action[a]), || {
                Violation::new("action is not by endomorphisms", json!({"h": a}))
            })?;
            for b in 0..h.order() {
                for x in 0..g.order() {
                    ensure(self.act(h.mul(a, b), x) == self.act(a, self.act(b, x)), || {
                        Violation::new("action is not compatible with multiplication", json!({"h1": a, "h2": b, "g": x}))
                    })?;
                }
            }
        }
        for x in 0..g.order() {
            ensure(self.act(h.identity(), x) == x, || Violation::new("identity does not act trivially", json!({"g": x})))?;
        }
        for a in 0..h.order() {
            for x in 0..g.order() {
                let lhs = self.t[self.act(a, x)];
                let rhs = h.mul(h.mul(a, self.t[x]), h.inv(a));
                ensure(lhs == rhs, || Violation::new("t is not equivariant", json!({"h": a, "g": x})))?;
            }
        }
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = self.act(self.t[x], y);
                let rhs = g.mul(g.mul(x, y), g.inv(x));
                ensure(lhs == rhs, || Violation::new("Peiffer identity fails", json!({"g": x, "g'": y})))?;
            }
        }
        Ok(())
    }

    fn check(&self) -> Result<()> {
        self.validate().map_err(Error::from)
    }

    pub fn report(&self) -> VerificationReport {
        VerificationReport::from_result("crossed-module", 0, self.validate())
    }

    /// `G ⋊ H` on pairs `(g, h)` indexed `g·|H| + h`, with
    /// `(g, h)(g', h') = (g · h▷g', h h')`.
    pub fn semidirect(&self) -> FiniteGroup {
        let (g, h) = (&*self.g, &*self.h);
        let nh = h.order();
        let n = g.order() * nh;
        let mul = (0..n)
            .map(|p| {
                let (g1, h1) = (p / nh, p % nh);
                (0..n)
                    .map(|q| {
                        let (g2, h2) = (q / nh, q % nh);
                        g.mul(g1, self.act(h1, g2)) * nh + h.mul(h1, h2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table_trusted(mul)
    }
}

/// The internal groupoid in FinGrp with objects `H`, arrows `G ⋊ H`,
/// `s(g, h) = h`, `t(g, h) = t(g) h`, unit `h ↦ (1, h)` and composition
/// `(g₂, h₂) ∘ (g₁, h₁) = (g₂ g₁, h₁)`.
pub fn xmod_to_groupoid(xm: &CrossedModule) -> Result<Cat> {
    xm.check()?;
    let (g, h) = (&*xm.g, &*xm.h);
    let nh = h.order();
    let obj = Obj::group_arc(xm.h.clone());
    let arr = Obj::group(xm.semidirect());
    let n = arr.size();
    let src = Arr::new(arr.clone(), obj.clone(), (0..n).map(|p| p % nh).collect())?;
    let tgt = Arr::new(arr.clone(), obj.clone(), (0..n).map(|p| h.mul(xm.t[p / nh], p % nh)).collect())?;
    let unit = Arr::new(obj.clone(), arr.clone(), (0..nh).map(|b| g.identity() * nh + b).collect())?;
    let cat = InternalCategory::with_composition(obj, arr, src, tgt, unit, |p2, p1| {
        g.mul(p2 / nh, p1 / nh) * nh + p1 % nh
    })?;
    Ok(Arc::new(cat))
}

/// `G = ker s`, `t` the restricted target, `H` acting by conjugation with
/// units.
pub fn groupoid_to_xmod(x: &InternalCategory) -> Result<CrossedModule> {
    let (Some(hg), Some(ag)) = (x.obj().as_group(), x.arr().as_group()) else {
        return Err(Error::Unsupported("crossed modules outside FinGrp"));
    };
    if !x.is_groupoid() {
        return Err(Error::Invalid("not a groupoid".into()));
    }
    let kernel: Vec<usize> = x.arr().elements().filter(|&a| x.s(a) == hg.identity()).collect();
    let g = ag.subgroup(&kernel)?;
    let pos = |a: usize| kernel.binary_search(&a).expect("kernel element");
    let t = kernel.iter().map(|&a| x.t(a)).collect();
    let action = (0..hg.order())
        .map(|b| {
            let e = x.e(b);
            kernel.iter().map(|&a| pos(ag.mul(ag.mul(e, a), ag.inv(e)))).collect()
        })
        .collect();
    CrossedModule::new(g, (**hg).clone(), t, action)
}

/// Isomorphisms `(φ: G → G', ψ: H → H')` commuting with `t` and the
/// actions.
pub fn crossed_module_iso(a: &CrossedModule, b: &CrossedModule) -> Option<(Vec<usize>, Vec<usize>)> {
    if a.g.order() != b.g.order() || a.h.order() != b.h.order() {
        return None;
    }
    let bij = |t: &Vec<usize>| {
        let mut s = t.clone();
        s.sort_unstable();
        s.dedup();
        s.len() == t.len()
    };
    let phis: Vec<Vec<usize>> = a.g.homs_to(&b.g).into_iter().filter(bij).collect();
    let psis: Vec<Vec<usize>> = a.h.homs_to(&b.h).into_iter().filter(bij).collect();
    for psi in &psis {
        for phi in &phis {
            let t_ok = (0..a.g.order()).all(|x| psi[a.t[x]] == b.t[phi[x]]);
            let act_ok = t_ok
                && (0..a.h.order()).all(|h| (0..a.g.order()).all(|x| phi[a.act(h, x)] == b.act(psi[h], phi[x])));
            if act_ok {
                return Some((phi.clone(), psi.clone()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::internal::disc;

    fn z4_to_z2() -> CrossedModule {
        CrossedModule::with_trivial_action(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 0, 1]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(CrossedModule::identity(FiniteGroup::symmetric3()).validate().is_ok());
        assert!(z4_to_z2().validate().is_ok());
        // the generator of Z2 acting by inversion on Z4: t(h▷g) = t(g) still
        // holds but Peiffer fails for g of order 4
        let inv = vec![vec![0, 1, 2, 3], vec![0, 3, 2, 1]];
        let bad = CrossedModule { action: inv, ..z4_to_z2() };
        let v = bad.validate().unwrap_err();
        assert!(v.message.contains("Peiffer"), "{v}");
        assert!(CrossedModule::new(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 1, 0], vec![vec![0, 1, 2, 3]; 2]).is_err());
    }

    #[test]
    fn groupoid_round_trip() {
        let xm = z4_to_z2();
        let x = xmod_to_groupoid(&xm).unwrap();
        assert_eq!(x.arr().size(), 8);
        assert!(x.validate_groupoid().is_ok());
        assert!(x.src().is_surjective() && x.tgt().is_surjective());
        let back = groupoid_to_xmod(&x).unwrap();
        assert!(crossed_module_iso(&xm, &back).is_some());
        let s3 = CrossedModule::identity(FiniteGroup::symmetric3());
        let y = xmod_to_groupoid(&s3).unwrap();
        assert!(y.validate_groupoid().is_ok());
        assert!(crossed_module_iso(&s3, &groupoid_to_xmod(&y).unwrap()).is_some());
    }

    #[test]
    fn trivial_kernel_gives_discrete() {
        let h = FiniteGroup::cyclic(3);
        let xm = CrossedModule::with_trivial_action(FiniteGroup::trivial(), h.clone(), vec![0]).unwrap();
        let x = xmod_to_groupoid(&xm).unwrap();
        assert_eq!(*x, *disc(&Obj::group(h)));
    }
}
