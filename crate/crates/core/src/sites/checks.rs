//! Exhaustive checks of pretopology axioms and derived properties within a
//! size bound.

use serde_json::json;

use super::pretopology::Pretopology;
use crate::ambient::{arrows_into, comp, homs, is_effective, lift, probe_objects, pullback, Arr, Obj};
use crate::report::{Check, VerificationReport, Violation};

pub(crate) fn arr_json(f: &Arr) -> serde_json::Value {
    json!({"dom": f.dom().size(), "cod": f.cod().size(), "table": f.table()})
}

/// Containment of isomorphisms, pullback stability and closure under
/// composition, over all probe objects of size at most `bound`.
pub fn check_pretopology_axioms(j: &Pretopology, bound: usize) -> VerificationReport {
    let objs = probe_objects(j.ambient(), bound);
    let mut check = Check::new(format!("pretopology-axioms[{}]", j.name()), bound);
    for a in &objs {
        for b in objs.iter().filter(|b| b.size() == a.size()) {
            for f in homs(b, a).unwrap_or_default().into_iter().filter(Arr::is_iso) {
                if j.contains(&f) {
                    check.pass();
                } else {
                    check.fail(Violation::new("isomorphism is not a cover", arr_json(&f)));
                }
            }
        }
    }
    for a in &objs {
        let gens = j.generators(a);
        for c in gens.iter() {
            for g in arrows_into(a, bound) {
                let pb = pullback(&g, c).expect("shared codomain");
                if j.contains(&pb.proj1) {
                    check.pass();
                } else {
                    check.fail(Violation::new(
                        "pullback of a cover is not a cover",
                        json!({"cover": arr_json(c), "along": arr_json(&g), "pullback": arr_json(&pb.proj1)}),
                    ));
                }
            }
            for d in j.generators(c.dom()).iter() {
                let cd = comp(c, d);
                if j.contains(&cd) {
                    check.pass();
                } else {
                    check.fail(Violation::new(
                        "composite of covers is not a cover",
                        json!({"outer": arr_json(c), "inner": arr_json(d)}),
                    ));
                }
            }
        }
    }
    check.finish()
}

/// A composable pair `h: C → B`, `g: B → A` with `g ∘ h` a cover and `g`
/// not a cover, searched in order of `|B|`, `|A|`, `g`, `|C|`, `h`.
pub fn saturation_witness(j: &Pretopology, bound: usize) -> Option<(Arr, Arr)> {
    let objs = probe_objects(j.ambient(), bound);
    for b in &objs {
        for a in &objs {
            for g in homs(b, a).unwrap_or_default().into_iter().filter(|g| !j.contains(g)) {
                for c in &objs {
                    if let Some(h) = homs(c, b).unwrap_or_default().into_iter().find(|h| j.contains(&comp(&g, h))) {
                        return Some((h, g));
                    }
                }
            }
        }
    }
    None
}

pub fn is_saturated(j: &Pretopology, bound: usize) -> bool {
    saturation_witness(j, bound).is_none()
}

/// Every generator cover of every probe object is effective.
pub fn check_subcanonical(j: &Pretopology, bound: usize) -> VerificationReport {
    let mut check = Check::new(format!("subcanonical[{}]", j.name()), bound);
    for a in probe_objects(j.ambient(), bound) {
        for c in j.generators(&a).iter() {
            if is_effective(c) {
                check.pass();
            } else {
                check.fail(Violation::new("cover is not effective", arr_json(c)));
            }
        }
    }
    check.finish()
}

pub fn is_subcanonical(j: &Pretopology, bound: usize) -> bool {
    check_subcanonical(j, bound).passed()
}

/// `J ⊂ K ⊂ J_un` on generators of probe objects.
pub fn cofinality(j: &Pretopology, k: &Pretopology, bound: usize) -> Result<(), Violation> {
    for a in probe_objects(j.ambient(), bound) {
        for c in j.generators(&a).iter() {
            if !k.contains(c) {
                return Err(Violation::new(format!("{} cover is not a {} cover", j.name(), k.name()), arr_json(c)));
            }
        }
        for c in k.generators(&a).iter() {
            if let Some(g) = j.universal_epi_failure(c, bound) {
                return Err(Violation::new(
                    format!("{} cover is not a universal {}-epimorphism", k.name(), j.name()),
                    json!({"cover": arr_json(c), "along": arr_json(&g)}),
                ));
            }
        }
    }
    Ok(())
}

pub fn is_cofinal(j: &Pretopology, k: &Pretopology, bound: usize) -> bool {
    cofinality(j, k, bound).is_ok()
}

/// The category of covers of a fixed object: generator covers and arrows
/// between their domains commuting over the base.
#[derive(Debug, Clone)]
pub struct CoverCategory {
    pub base: Obj,
    pub covers: Vec<Arr>,
}

impl CoverCategory {
    pub fn new(j: &Pretopology, base: &Obj) -> Self {
        Self { base: base.clone(), covers: j.generators(base).to_vec() }
    }

    /// Arrows `k` with `covers[to] ∘ k = covers[from]`.
    pub fn morphisms(&self, from: usize, to: usize) -> Vec<Arr> {
        let (c, d) = (&self.covers[from], &self.covers[to]);
        homs(c.dom(), d.dom())
            .unwrap_or_default()
            .into_iter()
            .filter(|k| comp(d, k) == *c)
            .collect()
    }

    pub fn has_morphism(&self, from: usize, to: usize) -> bool {
        lift(&self.covers[from], &self.covers[to]).is_some()
    }
}

/// Exhaustive subset search gives up past this many candidate subsets and
/// falls back to a greedy cover.
const WISC_SEARCH_LIMIT: usize = 200_000;

/// A smallest set of generator covers of `a` from which every generator
/// cover receives a morphism over `a`; ties are broken by the order of the
/// generator list.
pub fn wisc_witness(j: &Pretopology, a: &Obj) -> Vec<Arr> {
    let cat = CoverCategory::new(j, a);
    let n = cat.covers.len();
    // reaches[i][k]: a morphism from cover i to cover k
    let reaches: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|k| i == k || cat.has_morphism(i, k)).collect()).collect();
    let covers_all = |set: &[usize]| (0..n).all(|k| set.iter().any(|&i| reaches[i][k]));
    let mut budget = WISC_SEARCH_LIMIT;
    for size in 0..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if budget == 0 {
                return greedy_cover(&cat, &reaches);
            }
            budget -= 1;
            if covers_all(&idx) {
                return idx.iter().map(|&i| cat.covers[i].clone()).collect();
            }
            // next combination in lexicographic order
            let Some(p) = (0..size).rev().find(|&p| idx[p] < n - size + p) else { break };
            idx[p] += 1;
            for q in p + 1..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    cat.covers
}

fn greedy_cover(cat: &CoverCategory, reaches: &[Vec<bool>]) -> Vec<Arr> {
    let n = cat.covers.len();
    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    while covered.iter().any(|c| !c) {
        let best = (0..n)
            .max_by_key(|&i| (reaches[i].iter().zip(&covered).filter(|(r, c)| **r && !**c).count(), std::cmp::Reverse(i)))
            .expect("nonempty");
        for k in 0..n {
            covered[k] |= reaches[best][k];
        }
        chosen.push(cat.covers[best].clone());
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::Ambient;

    #[test]
    fn axioms_of_shipped_classes() {
        assert!(check_pretopology_axioms(&Pretopology::surjections(Ambient::FinSet), 4).passed());
        assert!(check_pretopology_axioms(&Pretopology::triv(Ambient::FinSet), 4).passed());
        let ids = check_pretopology_axioms(&Pretopology::identities(Ambient::FinSet), 4);
        assert!(ids.failed());
        assert_eq!(ids.witness().unwrap()["table"], json!([1, 0]));
    }

    #[test]
    fn saturation() {
        assert!(is_saturated(&Pretopology::surjections(Ambient::FinSet), 4));
        assert!(is_saturated(&Pretopology::all_arrows(Ambient::FinSet), 3));
        let (h, g) = saturation_witness(&Pretopology::triv(Ambient::FinSet), 4).unwrap();
        assert_eq!((h.dom().size(), h.cod().size(), g.cod().size()), (1, 2, 1));
        assert!(comp(&g, &h).is_iso() && !g.is_iso());
    }

    #[test]
    fn subcanonicity() {
        assert!(is_subcanonical(&Pretopology::surjections(Ambient::FinSet), 4));
        assert!(is_subcanonical(&Pretopology::triv(Ambient::FinSet), 4));
        assert!(!is_subcanonical(&Pretopology::all_arrows(Ambient::FinSet), 4));
    }

    #[test]
    fn cofinality_examples() {
        let triv = Pretopology::triv(Ambient::FinSet);
        let surj = Pretopology::surjections(Ambient::FinSet);
        assert!(is_cofinal(&surj, &surj, 4));
        assert!(is_cofinal(&triv, &surj, 4));
        assert!(!is_cofinal(&surj, &triv, 4));
        let all = Pretopology::all_arrows(Ambient::FinSet);
        assert!(!is_cofinal(&surj, &all, 3));
    }

    #[test]
    fn wisc() {
        let surj = Pretopology::surjections(Ambient::FinSet);
        assert_eq!(wisc_witness(&surj, &Obj::set(2)), vec![Arr::identity(&Obj::set(2))]);
        assert_eq!(wisc_witness(&surj, &Obj::set(0)), vec![Arr::identity(&Obj::set(0))]);
        let triv = Pretopology::triv(Ambient::FinSet);
        assert_eq!(wisc_witness(&triv, &Obj::set(3)), vec![Arr::identity(&Obj::set(3))]);
        let cat = CoverCategory::new(&surj, &Obj::set(2));
        let w = wisc_witness(&surj, &Obj::set(2));
        let wi = cat.covers.iter().position(|c| *c == w[0]).unwrap();
        for k in 0..cat.covers.len() {
            assert!(!cat.morphisms(wi, k).is_empty());
        }
    }
}
