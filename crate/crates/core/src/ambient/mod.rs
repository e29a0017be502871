//! Finite concrete ambient categories.
//!
//! Every object is a finite carrier `0..n` with optional algebraic structure
//! (a group law, or an action of a fixed group), and every arrow is an
//! element table. Arrow equality is table equality. Limits are the chosen
//! ones computed in [`pullback`]; see the normalisation rule there.

mod descent;
pub(crate) mod enumerate;
mod limits;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use descent::{descend, is_effective, is_effective_with, PROBE_BOUND};
pub use enumerate::{
    arrows_into, automorphisms, for_each_choice, gsets_up_to, homs, lift, probe_objects, HOM_LIMIT,
};
pub use limits::{coproduct, product, product_arrow, pullback, Coproduct, PullbackResult};

use crate::error::{Error, Result};
use crate::instances::FiniteGroup;

/// Algebraic structure carried by an object's elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Structure {
    Set,
    Group(Arc<FiniteGroup>),
    /// `action[g][x]` is `g · x`.
    GSet {
        group: Arc<FiniteGroup>,
        action: Arc<Vec<Vec<usize>>>,
    },
}

/// An object of a finite concrete ambient category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Obj {
    size: usize,
    structure: Structure,
}

impl Obj {
    pub fn set(size: usize) -> Self {
        Self { size, structure: Structure::Set }
    }

    pub fn group(group: FiniteGroup) -> Self {
        Self::group_arc(Arc::new(group))
    }

    pub fn group_arc(group: Arc<FiniteGroup>) -> Self {
        Self { size: group.order(), structure: Structure::Group(group) }
    }

    /// A finite G-set; `action[g][x]` must be a left action of `group`.
    pub fn gset(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::Invalid("action table needs one row per group element".into()));
        }
        let size = action.first().map_or(0, Vec::len);
        for row in &action {
            if row.len() != size {
                return Err(Error::Invalid("action rows have different lengths".into()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= size) {
                return Err(Error::OutOfRange { element: bad, size });
            }
        }
        for x in 0..size {
            if action[group.identity()][x] != x {
                return Err(Error::Invalid(format!("identity moves element {x}")));
            }
            for g in 0..group.order() {
                for h in 0..group.order() {
                    if action[group.mul(g, h)][x] != action[g][action[h][x]] {
                        return Err(Error::Invalid(format!(
                            "not an action at g={g}, h={h}, x={x}"
                        )));
                    }
                }
            }
        }
        Ok(Self { size, structure: Structure::GSet { group, action: Arc::new(action) } })
    }

    pub(crate) fn gset_trusted(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>, size: usize) -> Self {
        Self { size, structure: Structure::GSet { group, action: Arc::new(action) } }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// Elements in their fixed enumeration order.
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn as_group(&self) -> Option<&Arc<FiniteGroup>> {
        match &self.structure {
            Structure::Group(g) => Some(g),
            _ => None,
        }
    }

    /// The terminal object of the ambient this object lives in.
    pub fn terminal(&self) -> Obj {
        match &self.structure {
            Structure::Set => Obj::set(1),
            Structure::Group(_) => Obj::group(FiniteGroup::trivial()),
            Structure::GSet { group, .. } => {
                Obj::gset_trusted(group.clone(), vec![vec![0]; group.order()], 1)
            }
        }
    }

    pub(crate) fn same_ambient(&self, other: &Obj) -> bool {
        match (&self.structure, &other.structure) {
            (Structure::Set, Structure::Set) | (Structure::Group(_), Structure::Group(_)) => true,
            (Structure::GSet { group: g, .. }, Structure::GSet { group: h, .. }) => g == h,
            _ => false,
        }
    }

    /// Restriction of the structure to `elems`, with the inclusion arrow.
    pub fn subobject(&self, elems: &[usize]) -> Result<Arr> {
        let mut sub = elems.to_vec();
        sub.sort_unstable();
        sub.dedup();
        if let Some(&bad) = sub.iter().find(|&&x| x >= self.size) {
            return Err(Error::OutOfRange { element: bad, size: self.size });
        }
        let dom = match &self.structure {
            Structure::Set => Obj::set(sub.len()),
            Structure::Group(g) => Obj::group(g.subgroup(&sub)?),
            Structure::GSet { group, action } => {
                let pos = |x: usize| sub.binary_search(&x);
                let mut rows = Vec::with_capacity(group.order());
                for row in action.iter() {
                    let mut r = Vec::with_capacity(sub.len());
                    for &x in &sub {
                        r.push(pos(row[x]).map_err(|_| {
                            Error::Invalid(format!("subset not closed under the action at {x}"))
                        })?);
                    }
                    rows.push(r);
                }
                Obj::gset_trusted(group.clone(), rows, sub.len())
            }
        };
        Ok(Arr::trusted(dom, self.clone(), sub))
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.structure {
            Structure::Set => write!(f, "set({})", self.size),
            Structure::Group(_) => write!(f, "group({})", self.size),
            Structure::GSet { .. } => write!(f, "gset({})", self.size),
        }
    }
}

/// An arrow of the ambient: an element table between two objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Arr {
    dom: Obj,
    cod: Obj,
    table: Vec<usize>,
}

impl Arr {
    /// Checked constructor: the table must be total, in range, and respect
    /// the structure of both ends.
    pub fn new(dom: Obj, cod: Obj, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size {
            return Err(Error::DomainMismatch(format!(
                "table has {} entries for a domain of size {}",
                table.len(),
                dom.size
            )));
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= cod.size) {
            return Err(Error::OutOfRange { element: bad, size: cod.size });
        }
        if !dom.same_ambient(&cod) {
            return Err(Error::NotAMorphism(format!("{dom} and {cod} live in different ambients")));
        }
        let arr = Self { dom, cod, table };
        if !arr.respects_structure() {
            return Err(Error::NotAMorphism(format!("table {:?} does not preserve structure", arr.table)));
        }
        Ok(arr)
    }

    /// Arrows produced by limit constructions, already known to be morphisms.
    pub(crate) fn trusted(dom: Obj, cod: Obj, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), dom.size);
        debug_assert!(table.iter().all(|&y| y < cod.size));
        Self { dom, cod, table }
    }

    pub fn identity(obj: &Obj) -> Self {
        Self::trusted(obj.clone(), obj.clone(), obj.elements().collect())
    }

    /// The unique arrow into the terminal object.
    pub fn to_terminal(obj: &Obj) -> Self {
        Self::trusted(obj.clone(), obj.terminal(), vec![0; obj.size])
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Image of `x`; panics when out of range.
    #[inline]
    pub fn at(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn evaluate(&self, x: usize) -> Result<usize> {
        self.table
            .get(x)
            .copied()
            .ok_or(Error::OutOfRange { element: x, size: self.dom.size })
    }

    /// Literal identity: same object at both ends and the identity table.
    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Arr) -> Result<Arr> {
        compose(self, f)
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size];
        for &y in &self.table {
            hit[y] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod.size];
        for &y in &self.table {
            if std::mem::replace(&mut hit[y], true) {
                return false;
            }
        }
        true
    }

    /// Bijective; the inverse of a bijective homomorphism or equivariant
    /// map is again one, so this is invertibility in every shipped ambient.
    pub fn is_iso(&self) -> bool {
        self.dom.size == self.cod.size && self.is_injective()
    }

    pub fn inverse(&self) -> Result<Arr> {
        if !self.is_iso() {
            return Err(Error::NotInvertible);
        }
        let mut inv = vec![0; self.cod.size];
        for (x, &y) in self.table.iter().enumerate() {
            inv[y] = x;
        }
        Ok(Arr::trusted(self.cod.clone(), self.dom.clone(), inv))
    }

    /// Elements of the domain mapping to `y`.
    pub fn fiber(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.table.iter().enumerate().filter(move |(_, &v)| v == y).map(|(x, _)| x)
    }

    fn respects_structure(&self) -> bool {
        match (&self.dom.structure, &self.cod.structure) {
            (Structure::Set, Structure::Set) => true,
            (Structure::Group(g), Structure::Group(h)) => g.is_hom(h, &self.table),
            (
                Structure::GSet { group: g, action: a },
                Structure::GSet { group: h, action: b },
            ) => {
                g == h
                    && (0..g.order()).all(|e| {
                        (0..self.dom.size).all(|x| self.table[a[e][x]] == b[e][self.table[x]])
                    })
            }
            _ => false,
        }
    }
}

/// `g ∘ f`, defined when `cod(f) = dom(g)`.
pub fn compose(g: &Arr, f: &Arr) -> Result<Arr> {
    if f.cod != g.dom {
        return Err(Error::DomainMismatch(format!(
            "cannot compose: codomain {} differs from domain {}",
            f.cod, g.dom
        )));
    }
    Ok(Arr::trusted(
        f.dom.clone(),
        g.cod.clone(),
        f.table.iter().map(|&x| g.table[x]).collect(),
    ))
}

/// Shorthand for chains of compositions known to typecheck.
pub(crate) fn comp(g: &Arr, f: &Arr) -> Arr {
    compose(g, f).expect("composable by construction")
}

/// The ambient categories shipped with the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Ambient {
    FinSet,
    FinGrp,
    FinGSet(Arc<FiniteGroup>),
}

impl Ambient {
    pub fn fin_gset(group: FiniteGroup) -> Self {
        Ambient::FinGSet(Arc::new(group))
    }

    pub fn name(&self) -> String {
        match self {
            Ambient::FinSet => "FinSet".into(),
            Ambient::FinGrp => "FinGrp".into(),
            Ambient::FinGSet(g) => format!("FinGSet(order {})", g.order()),
        }
    }

    pub fn contains(&self, obj: &Obj) -> bool {
        match (self, obj.structure()) {
            (Ambient::FinSet, Structure::Set) | (Ambient::FinGrp, Structure::Group(_)) => true,
            (Ambient::FinGSet(g), Structure::GSet { group, .. }) => g == group,
            _ => false,
        }
    }

    pub fn terminal(&self) -> Obj {
        match self {
            Ambient::FinSet => Obj::set(1),
            Ambient::FinGrp => Obj::group(FiniteGroup::trivial()),
            Ambient::FinGSet(g) => Obj::gset_trusted(g.clone(), vec![vec![0]; g.order()], 1),
        }
    }

    pub fn supports_coproducts(&self) -> bool {
        !matches!(self, Ambient::FinGrp)
    }

    /// Object with `n` elements and no further structure beyond what the
    /// ambient forces (trivial action for G-sets); `None` for groups.
    pub fn discrete(&self, n: usize) -> Option<Obj> {
        match self {
            Ambient::FinSet => Some(Obj::set(n)),
            Ambient::FinGrp => None,
            Ambient::FinGSet(g) => {
                Some(Obj::gset_trusted(g.clone(), vec![(0..n).collect(); g.order()], n))
            }
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
        Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).unwrap()
    }

    #[test]
    fn composition_is_table_composition() {
        let f = map(3, 2, &[0, 0, 1]);
        let g = map(2, 3, &[0, 2]);
        assert_eq!(compose(&f, &g).unwrap().table(), &[0, 1]);
        let id = Arr::identity(&Obj::set(2));
        assert_eq!(compose(&id, &f).unwrap(), f);
        assert!(matches!(compose(&f, &f), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn evaluation_and_isos() {
        let swap = map(2, 2, &[1, 0]);
        assert_eq!(swap.evaluate(0).unwrap(), 1);
        assert!(swap.evaluate(2).is_err());
        assert_eq!(swap.inverse().unwrap(), swap);
        let id = Arr::identity(&Obj::set(3));
        assert!(id.is_iso());
        assert_eq!(id.inverse().unwrap(), id);
        assert!(!map(3, 2, &[0, 0, 1]).is_iso());
        assert_eq!(map(3, 2, &[0, 0, 1]).inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn checked_constructor_rejects_bad_tables() {
        assert!(Arr::new(Obj::set(2), Obj::set(2), vec![0]).is_err());
        assert!(Arr::new(Obj::set(2), Obj::set(2), vec![0, 2]).is_err());
        let z4 = Obj::group(FiniteGroup::cyclic(4));
        let z2 = Obj::group(FiniteGroup::cyclic(2));
        assert!(Arr::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).is_ok());
        assert!(Arr::new(z4, z2, vec![0, 1, 1, 0]).is_err());
    }

    #[test]
    fn equivariance_is_enforced() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let free = Obj::gset(z2.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let trivial = Obj::gset(z2.clone(), vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(Arr::new(free.clone(), trivial.clone(), vec![0, 0]).is_ok());
        assert!(Arr::new(free.clone(), trivial, vec![0, 1]).is_err());
        assert!(Arr::new(free.clone(), free, vec![1, 0]).is_ok());
    }

    #[test]
    fn subobjects_inherit_structure() {
        let z4 = Obj::group(FiniteGroup::cyclic(4));
        let inc = z4.subobject(&[0, 2]).unwrap();
        assert_eq!(inc.dom().size(), 2);
        assert!(Arr::new(inc.dom().clone(), z4.clone(), inc.table().to_vec()).is_ok());
        assert!(z4.subobject(&[0, 1]).is_err());
    }
}
