//! Exhaustive enumeration of hom-sets and small probe objects.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Ambient, Arr, Obj, Structure};
use crate::error::{Error, Result};
use crate::instances::FiniteGroup;

/// Refuse to list more arrows than this in one hom-set.
pub const HOM_LIMIT: usize = 2_000_000;

/// All arrows `A → B`, in lexicographic order of their tables.
pub fn homs(a: &Obj, b: &Obj) -> Result<Vec<Arr>> {
    if !a.same_ambient(b) {
        return Err(Error::DomainMismatch(format!("hom-set between {a} and {b}")));
    }
    let tables = match (a.structure(), b.structure()) {
        (Structure::Set, Structure::Set) => all_tables(a.size(), b.size())?,
        (Structure::Group(g), Structure::Group(h)) => g.homs_to(h),
        (Structure::GSet { group, action: act_a }, Structure::GSet { action: act_b, .. }) => {
            equivariant_tables(group, act_a, act_b, a.size(), b.size())?
        }
        _ => unreachable!("same ambient"),
    };
    Ok(tables.into_iter().map(|t| Arr::trusted(a.clone(), b.clone(), t)).collect())
}

fn check_count(base: usize, exp: usize) -> Result<()> {
    let mut total: usize = 1;
    for _ in 0..exp {
        total = total.saturating_mul(base);
        if total > HOM_LIMIT {
            return Err(Error::NotFoundWithinBound {
                what: format!("hom-set of size {base}^{exp} too large to enumerate"),
                bound: HOM_LIMIT,
            });
        }
    }
    Ok(())
}

/// Every table `0..n → 0..m`, lexicographic.
pub(crate) fn all_tables(n: usize, m: usize) -> Result<Vec<Vec<usize>>> {
    check_count(m, n)?;
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut t = vec![0; n];
    loop {
        out.push(t.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            t[i] += 1;
            if t[i] < m {
                break;
            }
            t[i] = 0;
        }
    }
}

fn orbits(group: &FiniteGroup, action: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut reps = Vec::new();
    let mut seen = vec![false; n];
    for x in 0..n {
        if seen[x] {
            continue;
        }
        reps.push(x);
        for g in 0..group.order() {
            seen[action[g][x]] = true;
        }
    }
    reps
}

/// Equivariant maps are determined by where orbit representatives go; an
/// image is admissible when its stabiliser contains the representative's.
fn equivariant_tables(
    group: &FiniteGroup,
    act_a: &[Vec<usize>],
    act_b: &[Vec<usize>],
    n: usize,
    m: usize,
) -> Result<Vec<Vec<usize>>> {
    let reps = orbits(group, act_a, n);
    let options: Vec<Vec<usize>> = reps
        .iter()
        .map(|&x| {
            (0..m)
                .filter(|&y| {
                    (0..group.order()).all(|g| act_a[g][x] != x || act_b[g][y] == y)
                })
                .collect()
        })
        .collect();
    let count = options.iter().fold(1usize, |acc, o| acc.saturating_mul(o.len()));
    if count > HOM_LIMIT {
        return Err(Error::NotFoundWithinBound {
            what: format!("equivariant hom-set with {count} members"),
            bound: HOM_LIMIT,
        });
    }
    let mut out = Vec::new();
    if options.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut choice = vec![0; reps.len()];
    loop {
        let mut t = vec![usize::MAX; n];
        for (k, &x) in reps.iter().enumerate() {
            let y = options[k][choice[k]];
            for g in 0..group.order() {
                t[act_a[g][x]] = act_b[g][y];
            }
        }
        out.push(t);
        let mut i = choice.len();
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// All objects of the ambient with at most `bound` elements, up to
/// isomorphism, in a fixed order (by size, then by a canonical table).
pub fn probe_objects(ambient: &Ambient, bound: usize) -> Vec<Obj> {
    match ambient {
        Ambient::FinSet => (0..=bound).map(Obj::set).collect(),
        Ambient::FinGrp => FiniteGroup::catalogue(bound.min(8))
            .into_iter()
            .map(|(_, g)| Obj::group(g))
            .collect(),
        Ambient::FinGSet(g) => gsets_up_to(g, bound),
    }
}

/// Finite G-sets of size at most `bound`, one per isomorphism class.
pub fn gsets_up_to(group: &Arc<FiniteGroup>, bound: usize) -> Vec<Obj> {
    let mut out = Vec::new();
    for n in 0..=bound {
        let mut seen = BTreeSet::new();
        let sym = permutations(n);
        let sym_group = symmetric_group(&sym);
        for hom in group.homs_to(&sym_group) {
            // action[g] = permutation hom[g]
            let action: Vec<Vec<usize>> = hom.iter().map(|&p| sym[p].clone()).collect();
            let canon = canonical_action(&action, &sym);
            if seen.insert(canon.clone()) {
                out.push(Obj::gset_trusted(group.clone(), canon, n));
            }
        }
    }
    out
}

fn canonical_action(action: &[Vec<usize>], sym: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut best: Option<Vec<Vec<usize>>> = None;
    for p in sym {
        // relabel x as p[x]: new[g][p[x]] = p[old[g][x]]
        let relabelled: Vec<Vec<usize>> = action
            .iter()
            .map(|row| {
                let mut r = vec![0; row.len()];
                for (x, &y) in row.iter().enumerate() {
                    r[p[x]] = p[y];
                }
                r
            })
            .collect();
        if best.as_ref().map_or(true, |b| relabelled < *b) {
            best = Some(relabelled);
        }
    }
    best.unwrap_or_else(|| action.to_vec())
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn symmetric_group(sym: &[Vec<usize>]) -> FiniteGroup {
    let index = |q: &Vec<usize>| sym.binary_search(q).expect("permutation listed");
    let mul = sym
        .iter()
        .map(|p| sym.iter().map(|q| index(&q.iter().map(|&i| p[i]).collect())).collect())
        .collect();
    FiniteGroup::from_table_trusted(mul)
}

/// Non-decreasing tables `0..n → 0..m`: one representative per orbit of
/// set maps under permutations of the domain.
pub(crate) fn sorted_tables(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    if m == 0 {
        return out;
    }
    let mut t = vec![0; n];
    loop {
        out.push(t.clone());
        let Some(i) = (0..n).rev().find(|&i| t[i] + 1 < m) else { return out };
        let v = t[i] + 1;
        for x in &mut t[i..] {
            *x = v;
        }
    }
}

/// Automorphisms of an object, identity first.
pub fn automorphisms(obj: &Obj) -> Vec<Arr> {
    let mut auts: Vec<Arr> = match obj.structure() {
        Structure::Set => permutations(obj.size())
            .into_iter()
            .map(|p| Arr::trusted(obj.clone(), obj.clone(), p))
            .collect(),
        _ => homs(obj, obj)
            .unwrap_or_default()
            .into_iter()
            .filter(Arr::is_iso)
            .collect(),
    };
    auts.sort_by_key(|a| !a.is_identity());
    auts
}

/// Lexicographically least table among `f ∘ σ` for automorphisms `σ`.
pub(crate) fn canonical_table(f: &Arr, auts: &[Arr]) -> Vec<usize> {
    if matches!(f.dom().structure(), Structure::Set) {
        let mut t = f.table().to_vec();
        t.sort_unstable();
        return t;
    }
    auts.iter()
        .map(|s| s.table().iter().map(|&x| f.at(x)).collect::<Vec<_>>())
        .min()
        .unwrap_or_else(|| f.table().to_vec())
}

/// Arrows into `a` from the probe objects of size at most `bound`, one per
/// class under precomposition with automorphisms, ordered by domain size and
/// then by table.
pub fn arrows_into(a: &Obj, bound: usize) -> Vec<Arr> {
    let ambient = ambient_of(a);
    let mut out = Vec::new();
    match a.structure() {
        Structure::Set => {
            for n in 0..=bound {
                let d = Obj::set(n);
                for t in sorted_tables(n, a.size()) {
                    out.push(Arr::trusted(d.clone(), a.clone(), t));
                }
            }
        }
        _ => {
            for d in probe_objects(&ambient, bound) {
                let auts = automorphisms(&d);
                let mut seen = BTreeSet::new();
                for h in homs(&d, a).unwrap_or_default() {
                    let canon = canonical_table(&h, &auts);
                    if seen.insert(canon.clone()) {
                        out.push(Arr::trusted(d.clone(), a.clone(), canon));
                    }
                }
            }
        }
    }
    out
}

/// Visits every choice vector `c` with `c[i] ∈ options[i]`, in
/// lexicographic order of positions, until `visit` returns `false`. Returns
/// `false` when the product exceeds `limit` and nothing is visited.
pub fn for_each_choice(options: &[Vec<usize>], limit: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    let count = options.iter().fold(1usize, |acc, o| acc.saturating_mul(o.len()));
    if count > limit {
        return false;
    }
    if count == 0 {
        return true;
    }
    let mut idx = vec![0usize; options.len()];
    let mut current: Vec<usize> = options.iter().map(|o| o[0]).collect();
    loop {
        if !visit(&current) {
            return true;
        }
        let mut i = idx.len();
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < options[i].len() {
                current[i] = options[i][idx[i]];
                break;
            }
            idx[i] = 0;
            current[i] = options[i][0];
        }
    }
}

pub(crate) fn ambient_of(obj: &Obj) -> Ambient {
    match obj.structure() {
        Structure::Set => Ambient::FinSet,
        Structure::Group(_) => Ambient::FinGrp,
        Structure::GSet { group, .. } => Ambient::FinGSet(group.clone()),
    }
}

/// Some `l: dom(c) → dom(f)` with `f ∘ l = c`.
pub fn lift(c: &Arr, f: &Arr) -> Option<Arr> {
    if c.cod() != f.cod() {
        return None;
    }
    if matches!(c.dom().structure(), Structure::Set) {
        let mut first = vec![None; f.cod().size()];
        for x in f.dom().elements().rev() {
            first[f.at(x)] = Some(x);
        }
        let table: Option<Vec<usize>> = c.table().iter().map(|&y| first[y]).collect();
        return table.map(|t| Arr::trusted(c.dom().clone(), f.dom().clone(), t));
    }
    homs(c.dom(), f.dom())
        .ok()?
        .into_iter()
        .find(|l| l.table().iter().map(|&x| f.at(x)).eq(c.table().iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_hom_counts() {
        assert_eq!(homs(&Obj::set(3), &Obj::set(2)).unwrap().len(), 8);
        assert_eq!(homs(&Obj::set(0), &Obj::set(0)).unwrap().len(), 1);
        assert_eq!(homs(&Obj::set(2), &Obj::set(0)).unwrap().len(), 0);
        let hs = homs(&Obj::set(2), &Obj::set(2)).unwrap();
        let tables: Vec<_> = hs.iter().map(|h| h.table().to_vec()).collect();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn group_homs_are_homomorphisms() {
        let z4 = Obj::group(FiniteGroup::cyclic(4));
        let z2 = Obj::group(FiniteGroup::cyclic(2));
        assert_eq!(homs(&z4, &z2).unwrap().len(), 2);
        assert_eq!(homs(&z2, &z4).unwrap().len(), 2);
    }

    #[test]
    fn gset_enumeration() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        // sizes 0,1,2,3: 1 + 1 + 2 + 2 isomorphism classes
        let sizes: Vec<usize> = gsets_up_to(&z2, 3).iter().map(Obj::size).collect();
        assert_eq!(sizes, vec![0, 1, 2, 2, 3, 3]);
        let trivial = Arc::new(FiniteGroup::trivial());
        assert_eq!(gsets_up_to(&trivial, 4).len(), 5);
        let objs = gsets_up_to(&z2, 2);
        let free = objs.iter().find(|o| o.size() == 2 && Arr::new((*o).clone(), (*o).clone(), vec![1, 0]).is_ok());
        assert!(free.is_some());
        for a in &objs {
            for b in &objs {
                let hs = homs(a, b).unwrap();
                let brute = all_tables(a.size(), b.size())
                    .unwrap()
                    .into_iter()
                    .filter(|t| Arr::new(a.clone(), b.clone(), t.clone()).is_ok())
                    .count();
                assert_eq!(hs.len(), brute);
            }
        }
    }

    #[test]
    fn sorted_tables_are_orbit_representatives() {
        assert_eq!(sorted_tables(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(sorted_tables(3, 4).len(), 20);
        assert_eq!(sorted_tables(0, 0).len(), 1);
        assert_eq!(arrows_into(&Obj::set(2), 2).len(), 1 + 2 + 3);
        let z4 = Obj::group(FiniteGroup::cyclic(4));
        assert_eq!(automorphisms(&z4).len(), 2);
        assert!(automorphisms(&z4)[0].is_identity());
    }

    #[test]
    fn lifting() {
        let f = Arr::new(Obj::set(3), Obj::set(2), vec![0, 0, 1]).unwrap();
        let c = Arr::new(Obj::set(2), Obj::set(2), vec![1, 0]).unwrap();
        let l = lift(&c, &f).unwrap();
        assert_eq!(l.table(), &[2, 0]);
        let g = Arr::new(Obj::set(1), Obj::set(2), vec![0]).unwrap();
        assert!(lift(&c, &g).is_none());
        let z4 = Obj::group(FiniteGroup::cyclic(4));
        let z2 = Obj::group(FiniteGroup::cyclic(2));
        let q = Arr::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(lift(&Arr::identity(&z2), &q).is_none());
        assert!(lift(&q, &q).is_some());
    }

    #[test]
    fn permutation_listing() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(symmetric_group(&permutations(3)).order(), 6);
    }
}
