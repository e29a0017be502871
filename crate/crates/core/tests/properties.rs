//! Invariants over randomly generated small instances.

use anacat::ambient::{compose, descend, homs, is_effective, pullback, Ambient, Arr, Obj};
use anacat::ana::{alpha, compose_ana, identity_transformation, pseudoinverse, vcomp, Anafunctor};
use anacat::instances::{xmod_to_groupoid, CrossedModule, FiniteGroup};
use anacat::internal::{
    base_change, base_change_coherence, cech, classify, codisc, disc, is_bunge_pare_equivalence, strict_pullback,
    BaseChange, Cat, InternalFunctor,
};
use anacat::laws::corpus::{groupoid, preorder};
use anacat::laws::{corpus_generate, Bounds};
use anacat::sites::Pretopology;
use proptest::prelude::*;

fn arrow(max_dom: usize, max_cod: usize) -> impl Strategy<Value = Arr> {
    (0..=max_dom, 1..=max_cod).prop_flat_map(|(d, c)| {
        proptest::collection::vec(0..c, d).prop_map(move |t| Arr::new(Obj::set(d), Obj::set(c), t).unwrap())
    })
}

/// A surjection onto `cod` with up to `extra` doubled points.
fn surjection_onto(cod: usize, extra: usize) -> impl Strategy<Value = Arr> {
    proptest::collection::vec(0..cod.max(1), 0..=extra).prop_flat_map(move |more| {
        let mut t: Vec<usize> = (0..cod).collect();
        if cod > 0 {
            t.extend(more);
        }
        Just(t).prop_shuffle().prop_map(move |t| Arr::new(Obj::set(t.len()), Obj::set(cod), t).unwrap())
    })
}

fn surjection(max_cod: usize) -> impl Strategy<Value = Arr> {
    (1..=max_cod).prop_flat_map(|c| surjection_onto(c, 2))
}

fn category() -> impl Strategy<Value = Cat> {
    prop_oneof![
        (1..=3usize)
            .prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..4)))
            .prop_map(|(n, rel)| preorder(n, &rel).unwrap()),
        (1..=3usize)
            .prop_flat_map(|n| (proptest::collection::vec(0..2usize, n), 1..=2usize, 1..=2usize))
            .prop_map(|(comp, a, b)| groupoid(&comp, &[a, b]).unwrap()),
        (1..=3usize).prop_map(|n| codisc(&Obj::set(n))),
        (1..=3usize).prop_map(|n| disc(&Obj::set(n))),
    ]
}

/// A category with a map into its objects from a set of at most 3 points.
fn category_with_cover(surjective: bool) -> impl Strategy<Value = (Cat, Arr)> {
    category().prop_flat_map(move |x| {
        let n = x.obj().size();
        let p = if surjective {
            surjection_onto(n, 1).boxed()
        } else {
            arrow(3, n).prop_filter("into X0", move |p| p.cod().size() == n).boxed()
        };
        (Just(x), p).prop_map(|(x, p)| {
            let p = Arr::new(p.dom().clone(), x.obj().clone(), p.table().to_vec()).unwrap();
            (x, p)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn pullbacks_along_identities_are_normalised(g in arrow(4, 4)) {
        let left = pullback(&Arr::identity(g.cod()), &g).unwrap();
        prop_assert_eq!(&left.apex, g.dom());
        prop_assert!(left.proj2.is_identity());
        prop_assert_eq!(&left.proj1, &g);
        let right = pullback(&g, &Arr::identity(g.cod())).unwrap();
        prop_assert_eq!(&right.apex, g.dom());
        prop_assert!(right.proj1.is_identity());
    }

    #[test]
    fn pullbacks_mediate_every_cone_uniquely(f in arrow(3, 3), g in arrow(3, 3), k in 0..=3usize) {
        prop_assume!(f.cod() == g.cod());
        let pb = pullback(&f, &g).unwrap();
        let probe = Obj::set(k);
        let legs_a = homs(&probe, f.dom()).unwrap();
        let legs_b = homs(&probe, g.dom()).unwrap();
        for p in &legs_a {
            for q in &legs_b {
                if compose(&f, p).unwrap() != compose(&g, q).unwrap() {
                    prop_assert!(pb.mediate(p, q).is_err());
                    continue;
                }
                let m = pb.mediate(p, q).unwrap();
                prop_assert_eq!(&compose(&pb.proj1, &m).unwrap(), p);
                prop_assert_eq!(&compose(&pb.proj2, &m).unwrap(), q);
                let others = homs(&probe, &pb.apex)
                    .unwrap()
                    .into_iter()
                    .filter(|n| compose(&pb.proj1, n).unwrap() == *p && compose(&pb.proj2, n).unwrap() == *q)
                    .count();
                prop_assert_eq!(others, 1);
            }
        }
    }

    #[test]
    fn descent_recovers_exactly_the_factor(q in surjection(4), y in 1..=4usize, seed in proptest::collection::vec(0..4usize, 4)) {
        let table: Vec<usize> = (0..q.cod().size()).map(|b| seed[b] % y).collect();
        let g = Arr::new(q.cod().clone(), Obj::set(y), table).unwrap();
        let h = compose(&g, &q).unwrap();
        prop_assert_eq!(descend(&q, &h).unwrap(), g.clone());
        // no other arrow B → Y factors h
        let factors = homs(q.cod(), g.cod()).unwrap().into_iter().filter(|k| compose(k, &q).unwrap() == h).count();
        prop_assert_eq!(factors, 1);
    }

    #[test]
    fn descent_refuses_maps_not_constant_on_fibres(q in surjection(3), h in arrow(5, 3)) {
        prop_assume!(h.dom() == q.dom());
        let constant = (0..q.dom().size()).all(|a| (0..q.dom().size()).all(|b| q.at(a) != q.at(b) || h.at(a) == h.at(b)));
        prop_assert_eq!(descend(&q, &h).is_ok(), constant);
    }

    #[test]
    fn effective_means_surjective_for_sets(f in arrow(5, 4)) {
        prop_assert_eq!(is_effective(&f), f.is_surjective());
    }

    #[test]
    fn constructions_pass_their_validators((x, p) in category_with_cover(false), f in arrow(4, 3)) {
        x.validate().unwrap();
        disc(x.obj()).validate().unwrap();
        codisc(x.obj()).validate_groupoid().unwrap();
        cech(&f).validate_groupoid().unwrap();
        let bc = BaseChange::new(&x, &p).unwrap();
        bc.cat().validate().unwrap();
        bc.projection().validate().unwrap();
        let sp = strict_pullback(&bc.projection(), &InternalFunctor::identity(&x)).unwrap();
        sp.cat.validate().unwrap();
        sp.proj1.validate().unwrap();
        sp.proj2.validate().unwrap();
    }

    #[test]
    fn base_change_is_coherent((x, p) in category_with_cover(false), seed in proptest::collection::vec(0..3usize, 3)) {
        prop_assert_eq!(&base_change(&x, &Arr::identity(x.obj())).unwrap(), &x);
        let m = p.dom().size();
        prop_assume!(m > 0);
        let q = Arr::new(Obj::set(seed.len()), p.dom().clone(), seed.iter().map(|&s| s % m).collect()).unwrap();
        let iso = base_change_coherence(&x, &q, &p).unwrap();
        prop_assert!(iso.f0().is_identity());
        prop_assert!(iso.f1().is_iso());
        iso.validate().unwrap();
    }

    #[test]
    fn units_are_strict((x, p) in category_with_cover(true)) {
        let bc = BaseChange::new(&x, &p).unwrap();
        let a = Anafunctor::assemble(x.clone(), x.clone(), p.clone(), bc.projection()).unwrap();
        let id = Anafunctor::identity(&x);
        prop_assert_eq!(&compose_ana(&id, &a).unwrap(), &a);
        prop_assert_eq!(&compose_ana(&a, &id).unwrap(), &a);
        prop_assert_eq!(&alpha(&InternalFunctor::identity(&x)), &id);
        let one = identity_transformation(&a);
        prop_assert_eq!(&vcomp(&one, &one).unwrap(), &one);
    }

    #[test]
    fn classifier_matches_bunge_pare_for_surjections((x, p) in category_with_cover(false)) {
        let j = Pretopology::surjections(Ambient::FinSet);
        let w = BaseChange::new(&x, &p).unwrap().projection();
        prop_assert_eq!(classify(&w, &j).is_equivalence(), is_bunge_pare_equivalence(&w, &j));
    }

    #[test]
    fn pseudoinverses_are_isotransformations((x, p) in category_with_cover(true)) {
        let j = Pretopology::surjections(Ambient::FinSet);
        let w = BaseChange::new(&x, &p).unwrap().projection();
        let inv = pseudoinverse(&w, &j).unwrap();
        inv.iota.validate_iso().unwrap();
        inv.epsilon.validate_iso().unwrap();
        inv.inverse.validate(&j).unwrap();
    }

    #[test]
    fn surjections_are_universal_epis(f in surjection(3)) {
        let j = Pretopology::surjections(Ambient::FinSet);
        prop_assert!(j.is_universal_epi(&f, 3));
    }
}

proptest! {
    // each corpus carries the full fixture catalogue, so keep this small
    #![proptest_config(ProptestConfig { cases: 4, ..ProptestConfig::default() })]

    #[test]
    fn corpora_are_deterministic(seed in 0..1000u64) {
        let bounds = Bounds { max_objects: 2, max_arrows: 6, random_categories: 4 };
        prop_assert_eq!(corpus_generate(seed, bounds).summary(), corpus_generate(seed, bounds).summary());
    }
}

#[test]
fn crossed_module_groupoids_validate() {
    for (name, g) in FiniteGroup::catalogue(8) {
        let xm = CrossedModule::identity(g);
        let x = xmod_to_groupoid(&xm).unwrap_or_else(|e| panic!("{name}: {e}"));
        x.validate_groupoid().unwrap_or_else(|v| panic!("{name}: {v}"));
        assert!(x.src().is_surjective() && x.tgt().is_surjective(), "{name}");
    }
}
