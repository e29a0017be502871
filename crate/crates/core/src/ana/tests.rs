use super::*;
use crate::ambient::{Ambient, Arr, Obj};
use crate::instances::FiniteGroup;
use crate::internal::{
    codisc, delooping, disc, functors, into_codiscrete, BaseChange, Cat, InternalFunctor, NaturalTransformation,
};
use crate::sites::Pretopology;

fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
    Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).unwrap()
}

fn surj() -> Pretopology {
    Pretopology::surjections(Ambient::FinSet)
}

/// `(U, f)` with `f = X[U] → codisc(n)` given by an object map.
fn into_codisc(x: &Cat, cover: &Arr, f0: &[usize], n: usize) -> Anafunctor {
    let bc = BaseChange::new(x, cover).unwrap();
    let f = into_codiscrete(bc.cat(), &map(cover.dom().size(), n, f0)).unwrap();
    Anafunctor::new(x.clone(), f.cod().clone(), cover.clone(), f, &surj()).unwrap()
}

/// All anafunctors on a given cover into `y`.
fn anafunctors_on(x: &Cat, cover: &Arr, y: &Cat) -> Vec<Anafunctor> {
    let bc = BaseChange::new(x, cover).unwrap();
    functors(bc.cat(), y)
        .into_iter()
        .map(|f| Anafunctor::assemble(x.clone(), y.clone(), cover.clone(), f).unwrap())
        .collect()
}

/// All transformations between two anafunctors, by enumerating tables.
fn all_transformations(f: &Anafunctor, g: &Anafunctor) -> Vec<AnaTransformation> {
    let dom = crate::ambient::pullback(f.cover(), g.cover()).unwrap().apex;
    crate::ambient::homs(&dom, f.tgt().arr())
        .unwrap()
        .into_iter()
        .filter_map(|c| AnaTransformation::new(f.clone(), g.clone(), c).ok())
        .collect()
}

#[test]
fn functor_images_compose_strictly() {
    let x = codisc(&Obj::set(2));
    let id = InternalFunctor::identity(&x);
    let a = alpha(&id);
    assert!(a.cover().is_identity());
    assert_eq!(a, Anafunctor::identity(&x));
    let one = disc(&Obj::set(1));
    let f = into_codiscrete(&one, &map(1, 2, &[1])).unwrap();
    let g = into_codiscrete(&x, &map(2, 3, &[0, 2])).unwrap();
    let composite = compose_ana(&alpha(&f), &alpha(&g)).unwrap();
    assert_eq!(composite, alpha(&InternalFunctor::compose(&g, &f).unwrap()));
    let h = into_codisc(&x, &map(3, 2, &[0, 0, 1]), &[0, 1, 1], 2);
    assert_eq!(compose_ana(&Anafunctor::identity(&x), &h).unwrap(), h);
    assert_eq!(compose_ana(&h, &Anafunctor::identity(h.tgt())).unwrap(), h);
}

#[test]
fn composite_cover_size() {
    let x = codisc(&Obj::set(2));
    let u = map(3, 2, &[0, 0, 1]);
    let f = into_codisc(&x, &u, &[0, 0, 1], 2);
    let g = into_codisc(f.tgt(), &map(3, 2, &[0, 0, 1]), &[0, 1, 0], 2);
    let gf = compose_ana(&f, &g).unwrap();
    assert_eq!(gf.cover().dom().size(), 5);
    assert!(gf.validate(&surj()).is_ok());
}

#[test]
fn identity_transformations() {
    let x = codisc(&Obj::set(2));
    let f = into_codisc(&x, &map(3, 2, &[0, 0, 1]), &[0, 0, 1], 2);
    let id = identity_transformation(&f);
    assert_eq!(id.domain().len(), 5);
    assert!(id.validate_iso().is_ok());
    assert_eq!(vcomp(&id, &id).unwrap(), id);
    let plain = into_codiscrete(&x, &map(2, 2, &[1, 0])).unwrap();
    let idp = identity_transformation(&alpha(&plain));
    assert_eq!(idp, alpha_transformation(&NaturalTransformation::identity(&plain)));
}

#[test]
fn renamings() {
    let x = codisc(&Obj::set(2));
    let f = into_codisc(&x, &map(3, 2, &[0, 0, 1]), &[0, 1, 1], 2);
    let same = renaming(&f, &Arr::identity(f.cover().dom())).unwrap();
    assert_eq!(same, identity_transformation(&f));
    // refinements 4 → 3 → 2 over X₀
    let k1 = map(3, 3, &[1, 0, 2]);
    let k2 = map(4, 3, &[0, 1, 2, 2]);
    let r1 = renaming(&f, &k1).unwrap();
    let r2 = renaming(r1.tgt(), &k2).unwrap();
    let direct = renaming(&f, &crate::ambient::compose(&k1, &k2).unwrap()).unwrap();
    assert_eq!(r2.tgt(), direct.tgt());
    assert_eq!(vcomp(&r1, &r2).unwrap(), direct);
    assert!(direct.validate_iso().is_ok());
    // a map that does not commute with the covers
    let g = r1.tgt().clone();
    assert!(renaming_between(&f, &g, &map(3, 3, &[2, 2, 2])).is_err());
}

#[test]
fn descent_agrees_with_brute_force() {
    let x = disc(&Obj::set(1));
    let y = delooping(&FiniteGroup::cyclic(2));
    let cover = map(2, 1, &[0, 0]);
    let anas = anafunctors_on(&x, &cover, &y);
    assert_eq!(anas.len(), 2);
    let mut checked = 0;
    for f in &anas {
        for g in &anas {
            for h in &anas {
                for a in all_transformations(f, g) {
                    for b in all_transformations(g, h) {
                        let c = vcomp(&a, &b).unwrap();
                        let oracle = vcomp_candidates(&a, &b, 1 << 20).unwrap();
                        assert_eq!(oracle, vec![c.component().table().to_vec()]);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked >= 16);
}

#[test]
fn associator_and_units() {
    let x = codisc(&Obj::set(2));
    let f = into_codisc(&x, &map(3, 2, &[0, 0, 1]), &[0, 0, 1], 2);
    let g = into_codisc(f.tgt(), &map(3, 2, &[0, 1, 1]), &[1, 0, 0], 2);
    let h = into_codisc(g.tgt(), &map(3, 2, &[0, 0, 1]), &[0, 1, 1], 2);
    let a = associator(&f, &g, &h).unwrap();
    assert!(a.validate_iso().is_ok());
    assert!(a.invert().is_ok());
    let idy = Anafunctor::identity(f.tgt());
    let trivial = associator(&f, &idy, &g).unwrap();
    assert_eq!(trivial, identity_transformation(&compose_ana(&f, &g).unwrap()));
    assert!(check_unit_strictness(&f, &g, associator).is_ok());
    let k = into_codisc(h.tgt(), &map(2, 2, &[0, 1]), &[1, 0], 2);
    assert!(check_pentagon(&f, &g, &h, &k, associator).is_ok());
    let broken = check_pentagon(&f, &g, &h, &k, corrupted_associator);
    assert!(broken.is_err());
}

#[test]
fn whiskers_and_interchange() {
    let x = disc(&Obj::set(1));
    let y = delooping(&FiniteGroup::cyclic(2));
    let cover = map(2, 1, &[0, 0]);
    let anas = anafunctors_on(&x, &cover, &y);
    let z = delooping(&FiniteGroup::cyclic(2));
    let second: Vec<Anafunctor> = anafunctors_on(&y, &Arr::identity(y.obj()), &z);
    let a = all_transformations(&anas[0], &anas[1]);
    let a2 = all_transformations(&anas[1], &anas[0]);
    let b = all_transformations(&second[1], &second[1]);
    let b2 = all_transformations(&second[1], &second[1]);
    assert_eq!(b.len(), 2);
    assert!(!a.is_empty() && !b.is_empty());
    // whiskering with an identity does nothing
    let ida = whisker_after(&a[0], &Anafunctor::identity(&y)).unwrap();
    assert_eq!(ida, a[0]);
    let idb = whisker_before(&a[0], &Anafunctor::identity(&x)).unwrap();
    assert_eq!(idb, a[0]);
    let wid = whisker_after(&identity_transformation(&anas[0]), &second[0]).unwrap();
    assert_eq!(wid, identity_transformation(wid.src()));
    for a in &a {
        for a2 in &a2 {
            for b in &b {
                for b2 in &b2 {
                    check_interchange(a, a2, b, b2, vcomp).unwrap();
                }
            }
        }
    }
}

#[test]
fn pseudoinverse_of_a_point_of_codisc() {
    let one = disc(&Obj::set(1));
    let w = into_codiscrete(&one, &map(1, 2, &[0])).unwrap();
    let p = pseudoinverse(&w, &surj()).unwrap();
    assert_eq!(p.inverse.cover().dom().size(), 2);
    assert!(p.iota.validate_iso().is_ok());
    assert!(p.epsilon.validate_iso().is_ok());
    assert!(p.iota.invert().unwrap().validate().is_ok());
    let id = InternalFunctor::identity(&codisc(&Obj::set(2)));
    let q = pseudoinverse(&id, &surj()).unwrap();
    assert!(q.iota.validate_iso().is_ok() && q.epsilon.validate_iso().is_ok());
    let d2 = disc(&Obj::set(2));
    let bang = InternalFunctor::new(d2, one.clone(), map(2, 1, &[0, 0]), map(2, 1, &[0, 0])).unwrap();
    assert!(pseudoinverse(&bang, &surj()).is_err());
}

#[test]
fn recognising_functors() {
    let x = codisc(&Obj::set(2));
    let f = into_codiscrete(&x, &map(2, 3, &[2, 0])).unwrap();
    let (found, t) = is_isomorphic_to_functor(&alpha(&f)).unwrap();
    assert_eq!(found, f);
    assert!(t.validate_iso().is_ok());
    let cover = map(3, 2, &[0, 0, 1]);
    let bc = BaseChange::new(&x, &cover).unwrap();
    let restricted = InternalFunctor::compose(&f, &bc.projection()).unwrap();
    let a = Anafunctor::assemble(x.clone(), f.cod().clone(), cover, restricted).unwrap();
    let (found, t) = is_isomorphic_to_functor(&a).unwrap();
    assert_eq!(found, f);
    assert!(t.validate_iso().is_ok());
}

#[test]
fn hom_set_search_matches_full_enumeration() {
    let x = disc(&Obj::set(1));
    let y = delooping(&FiniteGroup::cyclic(2));
    let anas = anafunctors_on(&x, &map(2, 1, &[0, 0]), &y);
    for f in &anas {
        for g in &anas {
            let fast = ana_transformations(f, g, 1 << 16).unwrap();
            assert_eq!(fast, all_transformations(f, g));
        }
    }
    assert!(ana_transformations(&anas[0], &anas[0], 1).is_none());
}
