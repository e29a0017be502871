//! Extensivity of FinSet and the comparison between a family pretopology
//! and its coproduct pretopology.

use std::collections::HashSet;

use serde_json::json;

use super::checks::{arr_json, check_pretopology_axioms, check_subcanonical};
use super::family::{coproduct_pretopology, FamilyPretopology};
use crate::ambient::{
    arrows_into, coproduct, homs, probe_objects, pullback, Ambient, Arr, Coproduct, Obj, PROBE_BOUND,
};
use crate::ambient::enumerate::sorted_tables;
use crate::report::{Check, VerificationReport, Violation};

fn coproduct_or_initial(objs: &[Obj]) -> Coproduct {
    if objs.is_empty() {
        Coproduct { apex: Obj::set(0), injections: Vec::new() }
    } else {
        coproduct(objs).expect("FinSet has coproducts")
    }
}

/// For coproduct diagrams with at most two summands and all objects of
/// size at most `bound`: the squares `X_i → X` over `A_i → ⊔A` are all
/// pullbacks exactly when the `X_i → X` form a coproduct. Also checks that
/// the initial object is strict.
pub fn check_extensivity(ambient: &Ambient, bound: usize) -> VerificationReport {
    let law = "extensivity";
    if ambient != &Ambient::FinSet {
        return VerificationReport::skipped(law, bound, format!("coproduct machinery is FinSet-only, got {ambient}"));
    }
    let mut check = Check::new(law, bound);
    for a in probe_objects(ambient, bound) {
        let into_initial = homs(&a, &Obj::set(0)).unwrap_or_default();
        if into_initial.is_empty() || a.is_empty() {
            check.pass();
        } else {
            check.fail(Violation::new("initial object is not strict", json!({"object": a.size()})));
        }
    }
    let mut shapes: Vec<Vec<usize>> = vec![vec![]];
    for a1 in 0..=bound {
        shapes.push(vec![a1]);
        for a2 in 0..=bound - a1 {
            shapes.push(vec![a1, a2]);
        }
    }
    for shape in shapes {
        let summands: Vec<Obj> = shape.iter().map(|&n| Obj::set(n)).collect();
        let sum = coproduct_or_initial(&summands);
        for xn in 0..=bound {
            let x = Obj::set(xn);
            for f in homs(&x, &sum.apex).unwrap_or_default() {
                for_each_leg_family(&f, &sum, bound, &mut |legs| {
                    check.record(extensivity_instance(&f, &sum, legs));
                });
            }
        }
    }
    check.finish()
}

/// Families `u_i: X_i → X` with `f ∘ u_i` landing in summand `i`, one per
/// class under automorphisms of each `X_i`.
fn for_each_leg_family(f: &Arr, sum: &Coproduct, bound: usize, visit: &mut dyn FnMut(&[Arr])) {
    let k = sum.injections.len();
    let fibers: Vec<Vec<usize>> = (0..k)
        .map(|i| f.dom().elements().filter(|&x| sum.locate(f.at(x)).0 == i).collect())
        .collect();
    let options: Vec<Vec<Arr>> = fibers
        .iter()
        .map(|fib| {
            (0..=bound)
                .flat_map(|n| {
                    sorted_tables(n, fib.len()).into_iter().map(move |t| {
                        let table = t.iter().map(|&p| fib[p]).collect();
                        Arr::new(Obj::set(n), f.dom().clone(), table).expect("set map")
                    })
                })
                .collect()
        })
        .collect();
    let mut chosen: Vec<Arr> = Vec::with_capacity(k);
    fn rec(options: &[Vec<Arr>], chosen: &mut Vec<Arr>, visit: &mut dyn FnMut(&[Arr])) {
        if chosen.len() == options.len() {
            visit(chosen);
            return;
        }
        for u in &options[chosen.len()] {
            chosen.push(u.clone());
            rec(options, chosen, visit);
            chosen.pop();
        }
    }
    rec(&options, &mut chosen, visit);
}

fn extensivity_instance(f: &Arr, sum: &Coproduct, legs: &[Arr]) -> Result<(), Violation> {
    let mut all_pullbacks = true;
    for (i, u) in legs.iter().enumerate() {
        let inj = &sum.injections[i];
        let pb = pullback(f, inj).expect("shared codomain");
        // g_i: X_i → A_i is determined by f ∘ u_i landing in summand i
        let g_table: Vec<usize> = u.table().iter().map(|&x| sum.locate(f.at(x)).1).collect();
        let g = Arr::new(u.dom().clone(), inj.dom().clone(), g_table).expect("set map");
        let comparison = pb.mediate(u, &g).expect("square commutes");
        all_pullbacks &= comparison.is_iso();
    }
    let doms: Vec<Obj> = legs.iter().map(|u| u.dom().clone()).collect();
    let copair = if legs.is_empty() {
        Arr::new(Obj::set(0), f.dom().clone(), Vec::new()).expect("empty map")
    } else {
        coproduct(&doms).expect("FinSet").copair(legs).expect("legs share codomain")
    };
    let is_coproduct = copair.is_iso();
    if all_pullbacks == is_coproduct {
        Ok(())
    } else {
        Err(Violation::new(
            "squares are pullbacks but the legs are not a coproduct (or conversely)",
            json!({"f": arr_json(f), "legs": legs.iter().map(arr_json).collect::<Vec<_>>()}),
        ))
    }
}

/// Whether the object under `members` is the colimit of the family's
/// pairwise-pullback diagram, tested against `probes`.
pub fn is_effective_family(base: &Obj, members: &[Arr], probes: &[Obj]) -> bool {
    // Points of ⊔U_i, and which earlier points they must agree with.
    let points: Vec<(usize, usize)> =
        members.iter().enumerate().flat_map(|(i, m)| m.dom().elements().map(move |u| (i, u))).collect();
    let over: Vec<usize> = points.iter().map(|&(i, u)| members[i].at(u)).collect();
    for y in probes {
        let mut induced = HashSet::new();
        for g in homs(base, y).unwrap_or_default() {
            let cocone: Vec<usize> = over.iter().map(|&a| g.at(a)).collect();
            if !induced.insert(cocone) {
                return false;
            }
        }
        let mut cocones = Vec::new();
        let mut h = Vec::with_capacity(points.len());
        enumerate_cocones(&over, y.size(), &mut h, &mut cocones);
        if cocones.iter().any(|c| !induced.contains(c)) {
            return false;
        }
    }
    true
}

/// Assignments of probe values to the points of `⊔U_i` that agree on every
/// pair of points identified in some `U_i ×_A U_j`.
fn enumerate_cocones(over: &[usize], ysize: usize, h: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let k = h.len();
    if k == over.len() {
        out.push(h.clone());
        return;
    }
    for v in 0..ysize {
        if (0..k).all(|p| over[p] != over[k] || h[p] == v) {
            h.push(v);
            enumerate_cocones(over, ysize, h, out);
            h.pop();
        }
    }
}

/// Every generator family of every probe object is effective.
pub fn check_family_subcanonical(fam: &FamilyPretopology, bound: usize) -> VerificationReport {
    let mut check = Check::new(format!("subcanonical[{}]", fam.name()), bound);
    for a in probe_objects(fam.ambient(), bound) {
        let mut probes = probe_objects(fam.ambient(), PROBE_BOUND);
        if !probes.contains(&a) {
            probes.push(a.clone());
        }
        for members in fam.generators(&a) {
            if is_effective_family(&a, &members, &probes) {
                check.pass();
            } else {
                check.fail(Violation::new(
                    "covering family is not effective",
                    members.iter().map(arr_json).collect::<Vec<_>>(),
                ));
            }
        }
    }
    check.finish()
}

/// `∐J` is subcanonical exactly when `J` is.
pub fn check_subcanonicity_transfer(fam: &FamilyPretopology, bound: usize) -> VerificationReport {
    let law = format!("coproduct-subcanonicity[{}]", fam.name());
    let coprod = match coproduct_pretopology(fam.clone()) {
        Ok(c) => c,
        Err(e) => return VerificationReport::skipped(law, bound, e.to_string()),
    };
    let family_side = check_family_subcanonical(fam, bound).passed();
    let coproduct_side = check_subcanonical(&coprod, bound).passed();
    let mut check = Check::new(law, bound);
    if family_side == coproduct_side {
        check.pass();
    } else {
        check.fail(Violation::new(
            "subcanonicity of the family and coproduct pretopologies differ",
            json!({"family": family_side, "coproduct": coproduct_side}),
        ));
    }
    check.finish()
}

/// The axioms for the coproduct pretopology `∐J`.
pub fn check_coproduct_axioms(fam: &FamilyPretopology, bound: usize) -> VerificationReport {
    match coproduct_pretopology(fam.clone()) {
        Ok(c) => check_pretopology_axioms(&c, bound),
        Err(e) => VerificationReport::skipped(format!("pretopology-axioms[coprod-of:{}]", fam.name()), bound, e.to_string()),
    }
}

/// Universal J-epimorphisms and universal `∐J`-epimorphisms coincide on all
/// arrows between objects of size at most `bound`. Every disagreement is a
/// failure; the first is reported as the witness.
pub fn check_jun_equals_coprod_jun(fam: &FamilyPretopology, bound: usize) -> VerificationReport {
    let law = format!("universal-epis-agree[{}]", fam.name());
    let coprod = match coproduct_pretopology(fam.clone()) {
        Ok(c) => c,
        Err(e) => return VerificationReport::skipped(law, bound, e.to_string()),
    };
    let mut check = Check::new(law, bound);
    for a in probe_objects(fam.ambient(), bound) {
        for f in arrows_into(&a, bound) {
            let family_side = fam.is_universal_epi(&f, bound);
            let coproduct_side = coprod.is_universal_epi(&f, bound);
            if family_side == coproduct_side {
                check.pass();
            } else {
                check.fail(Violation::new(
                    "universal epimorphism classes differ",
                    json!({"arrow": arr_json(&f), "family": family_side, "coproduct": coproduct_side}),
                ));
            }
        }
    }
    check.finish()
}

/// Disagreements between the two universal-epi classes, for inspection.
pub fn jun_disagreements(fam: &FamilyPretopology, bound: usize) -> Vec<Arr> {
    let Ok(coprod) = coproduct_pretopology(fam.clone()) else { return Vec::new() };
    probe_objects(fam.ambient(), bound)
        .iter()
        .flat_map(|a| arrows_into(a, bound))
        .filter(|f| fam.is_universal_epi(f, bound) != coprod.is_universal_epi(f, bound))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sites::family::GeneratorFilter;
    use crate::sites::Pretopology;

    #[test]
    fn finset_is_extensive() {
        let r = check_extensivity(&Ambient::FinSet, 2);
        assert!(r.passed(), "{r}");
        assert!(r.instances > 100);
        let g = check_extensivity(&Ambient::FinGrp, 3);
        assert!(matches!(g.status, crate::report::Status::Skipped { .. }));
    }

    #[test]
    fn family_effectivity() {
        let two = Obj::set(2);
        let probes = probe_objects(&Ambient::FinSet, 3);
        let pt0 = Arr::new(Obj::set(1), two.clone(), vec![0]).unwrap();
        let pt1 = Arr::new(Obj::set(1), two.clone(), vec![1]).unwrap();
        assert!(is_effective_family(&two, &[pt0.clone(), pt1], &probes));
        assert!(!is_effective_family(&two, &[pt0], &probes));
        assert!(is_effective_family(&Obj::set(0), &[], &probes));
    }

    #[test]
    fn coproduct_comparisons() {
        let js = FamilyPretopology::covering_subsets();
        assert!(check_jun_equals_coprod_jun(&js, 3).passed());
        assert!(check_subcanonicity_transfer(&js, 3).passed());
        let single = FamilyPretopology::singletons(Arc::new(Pretopology::surjections(Ambient::FinSet)));
        assert!(check_jun_equals_coprod_jun(&single, 3).passed());
        let restricted = js.with_filter(GeneratorFilter::ProperMembers);
        let bad = jun_disagreements(&restricted, 2);
        assert!(!bad.is_empty());
        assert!(check_jun_equals_coprod_jun(&restricted, 2).failed());
    }
}
