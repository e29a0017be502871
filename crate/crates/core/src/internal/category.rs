//! Internal categories and groupoids.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::ambient::{pullback, Arr, Obj, PullbackResult};
use crate::error::{Error, Result};
use crate::report::{ensure, Violation};

/// Shared handle; categories are immutable once built.
pub type Cat = Arc<InternalCategory>;

/// A category internal to a finite concrete ambient.
///
/// Composable pairs are the chosen pullback of `src` along `tgt`: pairs
/// `(g, f)` with `s(g) = t(f)`, and `m(g, f)` is "`g` after `f`". The
/// inversion is present exactly when every arrow is invertible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InternalCategory {
    obj: Obj,
    arr: Obj,
    src: Arr,
    tgt: Arr,
    unit: Arr,
    composable: PullbackResult,
    mul: Arr,
    inv: Option<Arr>,
    #[serde(skip)]
    homs: Vec<Vec<usize>>,
}

impl InternalCategory {
    /// Builds and validates a category from its structure maps and a
    /// composition rule on composable pairs.
    pub fn with_composition(
        obj: Obj,
        arr: Obj,
        src: Arr,
        tgt: Arr,
        unit: Arr,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let composable = pullback(&src, &tgt)?;
        let table = (0..composable.len())
            .map(|z| {
                let (g, f) = composable.components(z);
                compose(g, f)
            })
            .collect();
        let mul = Arr::new(composable.apex.clone(), arr.clone(), table)?;
        let cat = Self::assemble(obj, arr, src, tgt, unit, mul)?;
        cat.validate()?;
        Ok(cat)
    }

    /// Checks only that the structure maps have the right shape; the
    /// category laws are left to [`validate`](Self::validate).
    pub fn assemble(obj: Obj, arr: Obj, src: Arr, tgt: Arr, unit: Arr, mul: Arr) -> Result<Self> {
        let shape = |f: &Arr, d: &Obj, c: &Obj, name: &str| -> Result<()> {
            if f.dom() != d || f.cod() != c {
                return Err(Error::DomainMismatch(format!("{name} has the wrong domain or codomain")));
            }
            Ok(())
        };
        shape(&src, &arr, &obj, "source map")?;
        shape(&tgt, &arr, &obj, "target map")?;
        shape(&unit, &obj, &arr, "unit map")?;
        let composable = pullback(&src, &tgt)?;
        shape(&mul, &composable.apex, &arr, "composition")?;
        let n = obj.size();
        let mut homs = vec![Vec::new(); n * n];
        for x in arr.elements() {
            homs[src.at(x) * n + tgt.at(x)].push(x);
        }
        let mut cat = Self { obj, arr, src, tgt, unit, composable, mul, inv: None, homs };
        cat.inv = cat.find_inversion();
        Ok(cat)
    }

    fn find_inversion(&self) -> Option<Arr> {
        let table: Option<Vec<usize>> = self.arr.elements().map(|g| self.inverse_of(g)).collect();
        table.and_then(|t| Arr::new(self.arr.clone(), self.arr.clone(), t).ok())
    }

    pub fn obj(&self) -> &Obj {
        &self.obj
    }

    pub fn arr(&self) -> &Obj {
        &self.arr
    }

    pub fn src(&self) -> &Arr {
        &self.src
    }

    pub fn tgt(&self) -> &Arr {
        &self.tgt
    }

    pub fn unit(&self) -> &Arr {
        &self.unit
    }

    pub fn mul(&self) -> &Arr {
        &self.mul
    }

    pub fn composable(&self) -> &PullbackResult {
        &self.composable
    }

    pub fn inversion(&self) -> Option<&Arr> {
        self.inv.as_ref()
    }

    pub fn is_groupoid(&self) -> bool {
        self.inv.is_some()
    }

    #[inline]
    pub fn s(&self, g: usize) -> usize {
        self.src.at(g)
    }

    #[inline]
    pub fn t(&self, g: usize) -> usize {
        self.tgt.at(g)
    }

    #[inline]
    pub fn e(&self, x: usize) -> usize {
        self.unit.at(x)
    }

    /// `g ∘ f`; panics unless `s(g) = t(f)`.
    #[inline]
    pub fn m(&self, g: usize, f: usize) -> usize {
        self.mul.at(self.composable.pair(g, f))
    }

    pub fn try_m(&self, g: usize, f: usize) -> Option<usize> {
        self.composable.locate(g, f).map(|z| self.mul.at(z))
    }

    /// Arrows from `x` to `y`.
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x * self.obj.size() + y]
    }

    /// Two-sided inverse of `g` under composition, if any.
    pub fn inverse_of(&self, g: usize) -> Option<usize> {
        let (x, y) = (self.s(g), self.t(g));
        self.hom(y, x)
            .iter()
            .copied()
            .find(|&h| self.try_m(h, g) == Some(self.e(x)) && self.try_m(g, h) == Some(self.e(y)))
    }

    /// Checks unit, source/target and associativity equations on every
    /// element and composable tuple, and the inverse laws when present.
    pub fn validate(&self) -> Result<(), Violation> {
        for x in self.obj.elements() {
            let ex = self.e(x);
            ensure(self.s(ex) == x && self.t(ex) == x, || {
                Violation::new("unit arrow does not start and end at its object", json!({"object": x, "unit": ex}))
            })?;
        }
        for z in 0..self.composable.len() {
            let (g, f) = self.composable.components(z);
            let gf = self.mul.at(z);
            ensure(self.s(gf) == self.s(f) && self.t(gf) == self.t(g), || {
                Violation::new("composite has the wrong endpoints", json!({"g": g, "f": f, "composite": gf}))
            })?;
        }
        for f in self.arr.elements() {
            let (x, y) = (self.s(f), self.t(f));
            ensure(self.m(self.e(y), f) == f && self.m(f, self.e(x)) == f, || {
                Violation::new("unit law fails", json!({"arrow": f}))
            })?;
        }
        for f in self.arr.elements() {
            for &g in self.from(self.t(f)) {
                let gf = self.m(g, f);
                for &h in self.from(self.t(g)) {
                    ensure(self.m(self.m(h, g), f) == self.m(h, gf), || {
                        Violation::new("composition is not associative", json!({"h": h, "g": g, "f": f}))
                    })?;
                }
            }
        }
        if let Some(inv) = &self.inv {
            for g in self.arr.elements() {
                let h = inv.at(g);
                ensure(
                    self.try_m(h, g) == Some(self.e(self.s(g))) && self.try_m(g, h) == Some(self.e(self.t(g))),
                    || Violation::new("inversion is not a two-sided inverse", json!({"arrow": g})),
                )?;
            }
        }
        Ok(())
    }

    /// Validates and additionally requires every arrow to be invertible.
    pub fn validate_groupoid(&self) -> Result<(), Violation> {
        self.validate()?;
        match self.arr.elements().find(|&g| self.inverse_of(g).is_none()) {
            None => Ok(()),
            Some(g) => Err(Violation::new("arrow has no inverse", json!({"arrow": g}))),
        }
    }

    /// Arrows with source `x`, in order.
    fn from(&self, x: usize) -> impl Iterator<Item = &usize> + '_ {
        let n = self.obj.size();
        (0..n).flat_map(move |y| self.homs[x * n + y].iter())
    }

    /// The inclusion `X₁^iso ↪ X₁` of invertible arrows.
    pub fn iso_arrows(&self) -> Arr {
        let isos: Vec<usize> = self.arr.elements().filter(|&g| self.inverse_of(g).is_some()).collect();
        self.arr.subobject(&isos).expect("invertible arrows form a subobject")
    }

    /// `(s, t): X₁ → X₀ × X₀` into the chosen product.
    pub fn source_target(&self) -> (PullbackResult, Arr) {
        let prod = crate::ambient::product(&self.obj, &self.obj).expect("same ambient");
        let st = prod.mediate(&self.src, &self.tgt).expect("cone over the terminal object");
        (prod, st)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
        Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).unwrap()
    }

    /// Two objects and one non-identity arrow 0 → 1.
    pub(crate) fn free_arrow() -> InternalCategory {
        InternalCategory::with_composition(
            Obj::set(2),
            Obj::set(3),
            map(3, 2, &[0, 1, 0]),
            map(3, 2, &[0, 1, 1]),
            map(2, 3, &[0, 1]),
            |g, f| if g == 2 { 2 } else if f == 2 { 2 } else { g },
        )
        .unwrap()
    }

    #[test]
    fn free_arrow_is_not_a_groupoid() {
        let c = free_arrow();
        assert!(!c.is_groupoid());
        assert_eq!(c.iso_arrows().table(), &[0, 1]);
        assert!(c.validate_groupoid().is_err());
        assert_eq!(c.hom(0, 1), &[2]);
    }

    #[test]
    fn corrupted_unit_is_reported() {
        let c = free_arrow();
        let bad = InternalCategory::assemble(
            c.obj().clone(),
            c.arr().clone(),
            c.src().clone(),
            c.tgt().clone(),
            map(2, 3, &[0, 2]),
            c.mul().clone(),
        );
        // the composition table no longer matches the shape of composable pairs
        assert!(bad.is_err() || bad.unwrap().validate().is_err());
        let bad = InternalCategory::assemble(
            Obj::set(2),
            Obj::set(3),
            map(3, 2, &[0, 1, 0]),
            map(3, 2, &[0, 1, 1]),
            map(2, 3, &[2, 1]),
            c.mul().clone(),
        )
        .unwrap();
        let v = bad.validate().unwrap_err();
        assert_eq!(v.witness["object"], 0);
    }
}
