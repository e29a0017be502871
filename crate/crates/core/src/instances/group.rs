//! Finite groups given by explicit multiplication tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group on the elements `0..order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from its multiplication table, checking the group axioms.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self> {
        let order = mul.len();
        if order == 0 {
            return Err(Error::Invalid("a group has at least one element".into()));
        }
        for row in &mul {
            if row.len() != order {
                return Err(Error::Invalid("multiplication table is not square".into()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::OutOfRange { element: bad, size: order });
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::Invalid("no two-sided identity".into()))?;
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::Invalid(format!(
                            "multiplication not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or_else(|| Error::Invalid(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(Self { order, mul, identity, inverse })
    }

    /// Table known to be a group (derived from other groups), so only the
    /// identity and inverses are recomputed.
    pub(crate) fn from_table_trusted(mul: Vec<Vec<usize>>) -> Self {
        let order = mul.len();
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e][x] == x))
            .expect("derived table has an identity");
        let inverse = (0..order)
            .map(|a| (0..order).find(|&b| mul[a][b] == identity).expect("derived table has inverses"))
            .collect();
        Self { order, mul, identity, inverse }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(mul).expect("cyclic group table")
    }

    /// Direct product with elements `(a, b)` encoded as `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let m = other.order;
        let n = self.order * m;
        let mut mul = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let (a1, b1) = (x / m, x % m);
                let (a2, b2) = (y / m, y % m);
                mul[x][y] = self.mul(a1, a2) * m + other.mul(b1, b2);
            }
        }
        Self::from_table(mul).expect("product of groups")
    }

    /// The group generated by the given permutations, elements listed in
    /// lexicographic order of their permutation tables.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Self {
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity];
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            for g in generators {
                let next: Vec<usize> = (0..degree).map(|i| g[current[i]]).collect();
                if !elements.contains(&next) {
                    elements.push(next);
                }
            }
            frontier += 1;
        }
        elements.sort();
        let index = |p: &Vec<usize>| elements.iter().position(|q| q == p).expect("closed");
        let mul = elements
            .iter()
            .map(|p| {
                elements
                    .iter()
                    // (p * q)(i) = p(q(i))
                    .map(|q| index(&(0..degree).map(|i| p[q[i]]).collect()))
                    .collect()
            })
            .collect();
        Self::from_table(mul).expect("permutation group")
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]])
    }

    pub fn dihedral4() -> Self {
        Self::from_permutations(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
    }

    pub fn quaternion() -> Self {
        // Elements ±1, ±i, ±j, ±k as (sign, unit) with unit in {1, i, j, k}.
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 1) => (true, 3),
                (2, 3) => (false, 1),
                (3, 2) => (true, 1),
                (3, 1) => (false, 2),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let mul = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (neg, u) = unit_mul(x % 4, y % 4);
                        let sign = (x / 4) ^ (y / 4) ^ usize::from(neg);
                        sign * 4 + u
                    })
                    .collect()
            })
            .collect();
        Self::from_table(mul).expect("quaternion group")
    }

    /// Named built-ins accepted by the instance file format.
    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "1" | "Z1" | "trivial" => Self::trivial(),
            "Z2" => Self::cyclic(2),
            "Z3" => Self::cyclic(3),
            "Z4" => Self::cyclic(4),
            "Z2xZ2" | "V4" => Self::cyclic(2).product(&Self::cyclic(2)),
            "S3" => Self::symmetric3(),
            _ => return None,
        })
    }

    /// Every group of order at most `max_order` (and at most 8), one per
    /// isomorphism class.
    pub fn catalogue(max_order: usize) -> Vec<(String, FiniteGroup)> {
        let z = Self::cyclic;
        let all = vec![
            ("1", z(1)),
            ("Z2", z(2)),
            ("Z3", z(3)),
            ("Z4", z(4)),
            ("Z2xZ2", z(2).product(&z(2))),
            ("Z5", z(5)),
            ("Z6", z(6)),
            ("S3", Self::symmetric3()),
            ("Z7", z(7)),
            ("Z8", z(8)),
            ("Z4xZ2", z(4).product(&z(2))),
            ("Z2xZ2xZ2", z(2).product(&z(2)).product(&z(2))),
            ("D4", Self::dihedral4()),
            ("Q8", Self::quaternion()),
        ];
        all.into_iter()
            .filter(|(_, g)| g.order() <= max_order)
            .map(|(n, g)| (n.to_string(), g))
            .collect()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        for x in 0..self.order {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.generated(&gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        subset.contains(&self.identity)
            && subset
                .iter()
                .all(|&a| subset.iter().all(|&b| subset.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, subset: &[usize]) -> bool {
        self.is_subgroup(subset)
            && (0..self.order).all(|g| {
                subset
                    .iter()
                    .all(|&n| subset.contains(&self.mul(self.mul(g, n), self.inv(g))))
            })
    }

    /// Restricts the table to a subgroup, re-indexing elements by their
    /// position in the sorted `subset`.
    pub fn subgroup(&self, subset: &[usize]) -> Result<Self> {
        let mut elems = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if !self.is_subgroup(&elems) {
            return Err(Error::Invalid(format!("{elems:?} is not a subgroup")));
        }
        let pos = |x: usize| elems.binary_search(&x).expect("closed under multiplication");
        let mul = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        Self::from_table(mul)
    }

    /// Whether `table` (indexed by elements of `self`) is a homomorphism into `cod`.
    pub fn is_hom(&self, cod: &FiniteGroup, table: &[usize]) -> bool {
        table.len() == self.order
            && (0..self.order).all(|a| {
                (0..self.order).all(|b| table[self.mul(a, b)] == cod.mul(table[a], table[b]))
            })
    }

    /// All homomorphisms into `cod`, found by assigning images to generators
    /// and propagating along right multiplication.
    pub fn homs_to(&self, cod: &FiniteGroup) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if let Some(t) = self.extend_hom(cod, &gens, &choice) {
                out.push(t);
            }
            // odometer over |cod|^|gens|
            let mut i = 0;
            loop {
                if i == choice.len() {
                    out.sort();
                    return out;
                }
                choice[i] += 1;
                if choice[i] < cod.order {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn extend_hom(&self, cod: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut table = vec![usize::MAX; self.order];
        table[self.identity] = cod.identity;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let v = cod.mul(table[x], img);
                if table[y] == usize::MAX {
                    table[y] = v;
                    stack.push(y);
                } else if table[y] != v {
                    return None;
                }
            }
        }
        Some(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_orders_and_shapes() {
        let cat = FiniteGroup::catalogue(8);
        assert_eq!(cat.len(), 14);
        let abelian: Vec<_> = cat.iter().filter(|(_, g)| g.is_abelian()).map(|(n, _)| n.as_str()).collect();
        assert!(!abelian.contains(&"S3") && !abelian.contains(&"D4") && !abelian.contains(&"Q8"));
        assert_eq!(FiniteGroup::symmetric3().order(), 6);
        assert_eq!(FiniteGroup::dihedral4().order(), 8);
    }

    #[test]
    fn hom_counts_match_known_values() {
        let z = FiniteGroup::cyclic;
        // |Hom(Z_m, Z_n)| = gcd(m, n)
        assert_eq!(z(4).homs_to(&z(2)).len(), 2);
        assert_eq!(z(4).homs_to(&z(6)).len(), 2);
        assert_eq!(z(3).homs_to(&z(4)).len(), 1);
        // Hom(S3, Z2) = {trivial, sign}; Hom(Z2, S3) = identity + 3 reflections
        assert_eq!(FiniteGroup::symmetric3().homs_to(&z(2)).len(), 2);
        assert_eq!(z(2).homs_to(&FiniteGroup::symmetric3()).len(), 4);
        let q8 = FiniteGroup::quaternion();
        for t in q8.homs_to(&FiniteGroup::dihedral4()) {
            assert!(q8.is_hom(&FiniteGroup::dihedral4(), &t));
        }
    }

    #[test]
    fn rejects_non_group_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroup::from_table(vec![]).is_err());
    }

    #[test]
    fn subgroups_and_normality() {
        let s3 = FiniteGroup::symmetric3();
        let cyclic = s3.generated(&[s3.generators()[0]]);
        assert!(s3.is_subgroup(&cyclic));
        let everything: Vec<usize> = (0..6).collect();
        assert!(s3.is_normal(&everything));
        let sub = s3.subgroup(&cyclic).unwrap();
        assert_eq!(sub.order(), cyclic.len());
    }
}
