//! Chosen pullbacks, products and coproducts.

use std::sync::Arc;

use serde::Serialize;

use super::{Arr, Obj, Structure};
use crate::error::{Error, Result};
use crate::instances::FiniteGroup;

const ABSENT: usize = usize::MAX;

/// A chosen pullback `A ×_C B` of a cospan `f: A → C ← B: g`.
///
/// Apex elements correspond to pairs `(a, b)` with `f(a) = g(b)`; `pairs`
/// lists them in apex order and `index` inverts that listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackResult {
    pub apex: Obj,
    pub proj1: Arr,
    pub proj2: Arr,
    #[serde(skip)]
    pairs: Vec<(usize, usize)>,
    #[serde(skip)]
    index: Vec<usize>,
    #[serde(skip)]
    width: usize,
}

/// Chosen pullback of `f: A → C` and `g: B → C`.
///
/// If `f` is an identity the apex is `B` itself with projections `(g, id)`;
/// symmetrically if `g` is an identity. Otherwise the apex is the
/// lexicographically ordered set of pairs `(a, b)` with `f(a) = g(b)`,
/// carrying the componentwise structure.
pub fn pullback(f: &Arr, g: &Arr) -> Result<PullbackResult> {
    if f.cod() != g.cod() {
        return Err(Error::DomainMismatch(format!(
            "pullback of arrows into {} and {}",
            f.cod(),
            g.cod()
        )));
    }
    let (a, b) = (f.dom(), g.dom());
    let width = b.size();
    if f.is_identity() {
        let pairs: Vec<_> = b.elements().map(|y| (g.at(y), y)).collect();
        return Ok(PullbackResult::assemble(b.clone(), g.clone(), Arr::identity(b), pairs, a.size(), width));
    }
    if g.is_identity() {
        let pairs: Vec<_> = a.elements().map(|x| (x, f.at(x))).collect();
        return Ok(PullbackResult::assemble(a.clone(), Arr::identity(a), f.clone(), pairs, a.size(), width));
    }
    let mut pairs = Vec::new();
    for x in a.elements() {
        for y in b.elements() {
            if f.at(x) == g.at(y) {
                pairs.push((x, y));
            }
        }
    }
    let mut index = vec![ABSENT; a.size() * width];
    for (i, &(x, y)) in pairs.iter().enumerate() {
        index[x * width + y] = i;
    }
    let at = |x: usize, y: usize| index[x * width + y];
    let n = pairs.len();
    let structure = match (a.structure(), b.structure()) {
        (Structure::Group(ga), Structure::Group(gb)) => {
            let mul = pairs
                .iter()
                .map(|&(x1, y1)| {
                    pairs
                        .iter()
                        .map(|&(x2, y2)| at(ga.mul(x1, x2), gb.mul(y1, y2)))
                        .collect()
                })
                .collect();
            Structure::Group(Arc::new(FiniteGroup::from_table_trusted(mul)))
        }
        (Structure::GSet { group, action: act_a }, Structure::GSet { action: act_b, .. }) => {
            let rows = (0..group.order())
                .map(|e| pairs.iter().map(|&(x, y)| at(act_a[e][x], act_b[e][y])).collect())
                .collect();
            Structure::GSet { group: group.clone(), action: Arc::new(rows) }
        }
        _ => Structure::Set,
    };
    let apex = Obj { size: n, structure };
    let proj1 = Arr::trusted(apex.clone(), a.clone(), pairs.iter().map(|p| p.0).collect());
    let proj2 = Arr::trusted(apex.clone(), b.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(PullbackResult { apex, proj1, proj2, pairs, index, width })
}

impl PullbackResult {
    fn assemble(
        apex: Obj,
        proj1: Arr,
        proj2: Arr,
        pairs: Vec<(usize, usize)>,
        height: usize,
        width: usize,
    ) -> Self {
        let mut index = vec![ABSENT; height * width];
        for (i, &(x, y)) in pairs.iter().enumerate() {
            index[x * width + y] = i;
        }
        Self { apex, proj1, proj2, pairs, index, width }
    }

    /// Apex element over `(a, b)`, if the pair lies in the pullback.
    pub fn locate(&self, a: usize, b: usize) -> Option<usize> {
        if b >= self.width {
            return None;
        }
        match self.index.get(a * self.width + b) {
            Some(&i) if i != ABSENT => Some(i),
            _ => None,
        }
    }

    /// Like [`locate`](Self::locate) for pairs known to be compatible.
    #[inline]
    pub fn pair(&self, a: usize, b: usize) -> usize {
        self.locate(a, b).expect("pair lies in the pullback")
    }

    /// The pair `(a, b)` over an apex element.
    #[inline]
    pub fn components(&self, z: usize) -> (usize, usize) {
        self.pairs[z]
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The unique arrow `Z → apex` whose projections are `p` and `q`.
    pub fn mediate(&self, p: &Arr, q: &Arr) -> Result<Arr> {
        if p.dom() != q.dom() {
            return Err(Error::NotACone("legs have different domains".into()));
        }
        if p.cod() != self.proj1.cod() || q.cod() != self.proj2.cod() {
            return Err(Error::NotACone("legs do not land in the cospan".into()));
        }
        let mut table = Vec::with_capacity(p.dom().size());
        for z in p.dom().elements() {
            match self.locate(p.at(z), q.at(z)) {
                Some(i) => table.push(i),
                None => {
                    return Err(Error::NotACone(format!(
                        "element {z} maps to ({}, {}), which lie over different points",
                        p.at(z),
                        q.at(z)
                    )))
                }
            }
        }
        Ok(Arr::trusted(p.dom().clone(), self.apex.clone(), table))
    }
}

/// Chosen product: the pullback over the terminal object.
pub fn product(a: &Obj, b: &Obj) -> Result<PullbackResult> {
    if !a.same_ambient(b) {
        return Err(Error::DomainMismatch(format!("product of {a} and {b}")));
    }
    pullback(&Arr::to_terminal(a), &Arr::to_terminal(b))
}

/// `f × g: A × B → C × D` between chosen products.
pub fn product_arrow(f: &Arr, g: &Arr) -> Result<Arr> {
    let src = product(f.dom(), g.dom())?;
    let tgt = product(f.cod(), g.cod())?;
    tgt.mediate(&super::comp(f, &src.proj1), &super::comp(g, &src.proj2))
}

/// A chosen coproduct: summands laid out one after another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coproduct {
    pub apex: Obj,
    pub injections: Vec<Arr>,
}

impl Coproduct {
    /// Summand index and position inside the summand of an apex element.
    pub fn locate(&self, z: usize) -> (usize, usize) {
        let mut offset = 0;
        for (i, inj) in self.injections.iter().enumerate() {
            let n = inj.dom().size();
            if z < offset + n {
                return (i, z - offset);
            }
            offset += n;
        }
        panic!("element {z} outside the coproduct");
    }

    /// The copairing `[h_1, ..., h_n]: ⊔ A_i → Y`.
    pub fn copair(&self, legs: &[Arr]) -> Result<Arr> {
        if legs.len() != self.injections.len() {
            return Err(Error::DomainMismatch("one leg per summand required".into()));
        }
        let cod = match legs.first() {
            Some(l) => l.cod().clone(),
            None => return Err(Error::DomainMismatch("copairing of no legs has no codomain".into())),
        };
        let mut table = Vec::with_capacity(self.apex.size());
        for (leg, inj) in legs.iter().zip(&self.injections) {
            if leg.dom() != inj.dom() || leg.cod() != &cod {
                return Err(Error::DomainMismatch("leg does not match its summand".into()));
            }
            table.extend_from_slice(leg.table());
        }
        Arr::new(self.apex.clone(), cod, table)
    }
}

/// Coproduct of a list of objects (disjoint union with stable order).
pub fn coproduct(objs: &[Obj]) -> Result<Coproduct> {
    let first = match objs.first() {
        Some(o) => o,
        None => return Err(Error::Unsupported("empty coproduct without an ambient")),
    };
    if objs.iter().any(|o| !o.same_ambient(first)) {
        return Err(Error::DomainMismatch("coproduct summands from different ambients".into()));
    }
    let total: usize = objs.iter().map(Obj::size).sum();
    let apex = match first.structure() {
        Structure::Group(_) => return Err(Error::Unsupported("coproducts")),
        Structure::Set => Obj::set(total),
        Structure::GSet { group, .. } => {
            let mut rows = vec![Vec::with_capacity(total); group.order()];
            let mut offset = 0;
            for o in objs {
                let Structure::GSet { action, .. } = o.structure() else { unreachable!() };
                for (e, row) in rows.iter_mut().enumerate() {
                    row.extend(action[e].iter().map(|&x| x + offset));
                }
                offset += o.size();
            }
            Obj::gset_trusted(group.clone(), rows, total)
        }
    };
    let mut injections = Vec::with_capacity(objs.len());
    let mut offset = 0;
    for o in objs {
        injections.push(Arr::trusted(o.clone(), apex.clone(), (offset..offset + o.size()).collect()));
        offset += o.size();
    }
    Ok(Coproduct { apex, injections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{compose, enumerate};

    fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
        Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).unwrap()
    }

    #[test]
    fn identity_normalisation() {
        let g = map(3, 2, &[0, 0, 1]);
        let pb = pullback(&Arr::identity(&Obj::set(2)), &g).unwrap();
        assert_eq!(pb.apex, Obj::set(3));
        assert_eq!(pb.proj1, g);
        assert!(pb.proj2.is_identity());
        let pb = pullback(&g, &Arr::identity(&Obj::set(2))).unwrap();
        assert!(pb.proj1.is_identity());
        assert_eq!(pb.proj2, g);
        assert_eq!(pb.locate(2, 1), Some(2));
        assert_eq!(pb.locate(2, 0), None);
    }

    #[test]
    fn kernel_pair_size() {
        let f = map(3, 2, &[0, 0, 1]);
        let pb = pullback(&f, &f).unwrap();
        assert_eq!(pb.apex.size(), 5);
        assert_eq!(pb.components(0), (0, 0));
        assert_eq!(pb.components(4), (2, 2));
        assert_eq!(compose(&f, &pb.proj1).unwrap(), compose(&f, &pb.proj2).unwrap());
    }

    #[test]
    fn bijections_pull_back_to_isomorphic_apex() {
        let f = map(3, 3, &[2, 0, 1]);
        let g = map(3, 3, &[1, 2, 0]);
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.apex.size(), 3);
        assert!(pb.proj1.is_iso() && pb.proj2.is_iso());
    }

    #[test]
    fn mediating_arrows() {
        let f = map(3, 2, &[0, 0, 1]);
        let pb = pullback(&f, &f).unwrap();
        let m = pb.mediate(&pb.proj1, &pb.proj2).unwrap();
        assert!(m.is_identity());
        let id = Arr::identity(&Obj::set(3));
        let diag = pb.mediate(&id, &id).unwrap();
        assert_eq!(diag.table(), &[0, 3, 4]);
        let bad = map(3, 3, &[2, 2, 2]);
        assert!(matches!(pb.mediate(&id, &bad), Err(Error::NotACone(_))));
    }

    #[test]
    fn universal_property_against_small_probes() {
        let f = map(3, 2, &[0, 0, 1]);
        let g = map(2, 2, &[1, 0]);
        let pb = pullback(&f, &g).unwrap();
        for z in 0..=3 {
            let zo = Obj::set(z);
            let ps = enumerate::homs(&zo, f.dom()).unwrap();
            let qs = enumerate::homs(&zo, g.dom()).unwrap();
            let into_apex = enumerate::homs(&zo, &pb.apex).unwrap();
            for p in &ps {
                for q in &qs {
                    let cone = compose(&f, p).unwrap() == compose(&g, q).unwrap();
                    let factorisations = into_apex
                        .iter()
                        .filter(|m| {
                            compose(&pb.proj1, m).unwrap() == *p && compose(&pb.proj2, m).unwrap() == *q
                        })
                        .count();
                    assert_eq!(factorisations, usize::from(cone));
                    assert_eq!(pb.mediate(p, q).is_ok(), cone);
                }
            }
        }
    }

    #[test]
    fn products_and_coproducts() {
        assert_eq!(product(&Obj::set(2), &Obj::set(3)).unwrap().apex.size(), 6);
        let c = coproduct(&[Obj::set(2), Obj::set(3)]).unwrap();
        assert_eq!(c.apex.size(), 5);
        assert_eq!(c.injections[0].table(), &[0, 1]);
        assert_eq!(c.injections[1].table(), &[2, 3, 4]);
        assert_eq!(c.locate(3), (1, 1));
        let z2 = Obj::group(FiniteGroup::cyclic(2));
        assert_eq!(coproduct(&[z2.clone(), z2.clone()]), Err(Error::Unsupported("coproducts")));
        assert_eq!(Error::Unsupported("coproducts").to_string(), "coproducts unsupported");
        let p = product(&z2, &z2).unwrap();
        assert_eq!(p.apex.as_group().unwrap().order(), 4);
        assert!(p.apex.as_group().unwrap().is_abelian());
    }

    #[test]
    fn gset_pullback_has_diagonal_action() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let free = Obj::gset(z2.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let pt = Arr::to_terminal(&free);
        let pb = pullback(&pt, &pt).unwrap();
        assert_eq!(pb.apex.size(), 4);
        let Structure::GSet { action, .. } = pb.apex.structure() else { panic!() };
        // (0,0) ↦ (1,1), (0,1) ↦ (1,0)
        assert_eq!(action[1], vec![3, 2, 1, 0]);
    }
}
