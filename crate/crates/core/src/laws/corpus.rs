//! Deterministic corpora of small internal categories, functors and
//! anafunctors.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ambient::{arrows_into, gsets_up_to, homs, Ambient, Arr, Obj, Structure};
use crate::ana::{ana_transformations, renaming, AnaTransformation, Anafunctor};
use crate::error::Result;
use crate::instances::{xmod_to_groupoid, CrossedModule, FiniteGroup};
use crate::internal::{
    cech, codisc, delooping, disc, from_discrete, functors_with_object_map, into_codiscrete, to_codiscrete,
    BaseChange, Cat, InternalCategory, InternalFunctor,
};

/// Size limits for the randomised part of a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_objects: usize,
    pub max_arrows: usize,
    pub random_categories: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { max_objects: 4, max_arrows: 10, random_categories: 50 }
    }
}

impl Bounds {
    /// Object bound `k` with the default arrow bound; `k = 0` keeps only
    /// the fixtures.
    pub fn with_objects(k: usize) -> Self {
        Self { max_objects: k, ..Self::default() }
    }

    pub fn fixtures_only() -> Self {
        Self::with_objects(0)
    }

    fn random(&self) -> bool {
        self.max_objects > 0 && self.random_categories > 0
    }
}

#[derive(Debug, Clone)]
pub struct Named<T> {
    pub name: String,
    pub item: T,
}

fn named<T>(name: impl Into<String>, item: T) -> Named<T> {
    Named { name: name.into(), item }
}

/// Four composable anafunctors with, for each, two composable
/// transformations `f ⇒ f′ ⇒ f″` out of it.
#[derive(Debug, Clone)]
pub struct Chain {
    pub links: Vec<Anafunctor>,
    pub moves: Vec<[AnaTransformation; 2]>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub seed: u64,
    pub bounds: Bounds,
    pub categories: Vec<Named<Cat>>,
    pub functors: Vec<Named<InternalFunctor>>,
    pub anafunctors: Vec<Named<Anafunctor>>,
    /// Sets of parallel anafunctors over small covers.
    pub families: Vec<Vec<Anafunctor>>,
    pub chains: Vec<Chain>,
    pub crossed: Vec<Named<CrossedModule>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub categories: BTreeMap<String, usize>,
    pub functors: usize,
    pub anafunctors: usize,
    pub families: usize,
    pub chains: usize,
    pub crossed_modules: usize,
}

impl Corpus {
    pub fn summary(&self) -> Summary {
        let mut categories = BTreeMap::new();
        for c in &self.categories {
            *categories.entry(ambient_of(&c.item).name()).or_insert(0) += 1;
        }
        Summary {
            seed: self.seed,
            categories,
            functors: self.functors.len(),
            anafunctors: self.anafunctors.len(),
            families: self.families.len(),
            chains: self.chains.len(),
            crossed_modules: self.crossed.len(),
        }
    }

    pub fn categories_in<'a>(&'a self, ambient: &'a Ambient) -> impl Iterator<Item = &'a Named<Cat>> + 'a {
        self.categories.iter().filter(move |c| &ambient_of(&c.item) == ambient)
    }
}

pub fn ambient_of(x: &InternalCategory) -> Ambient {
    match x.obj().structure() {
        Structure::Set => Ambient::FinSet,
        Structure::Group(_) => Ambient::FinGrp,
        Structure::GSet { group, .. } => Ambient::FinGSet(group.clone()),
    }
}

fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
    Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).expect("fixture map")
}

/// A FinSet category on `n` objects from a list of arrows `(s, t)`, their
/// units and composition "`g` after `f`" on arrow indices.
pub fn explicit_category(
    n: usize,
    arrows: &[(usize, usize)],
    units: &[usize],
    compose: impl Fn(usize, usize) -> usize,
) -> Result<Cat> {
    let (obj, arr) = (Obj::set(n), Obj::set(arrows.len()));
    let src = Arr::new(arr.clone(), obj.clone(), arrows.iter().map(|a| a.0).collect())?;
    let tgt = Arr::new(arr.clone(), obj.clone(), arrows.iter().map(|a| a.1).collect())?;
    let unit = Arr::new(obj.clone(), arr.clone(), units.to_vec())?;
    Ok(Arc::new(InternalCategory::with_composition(obj, arr, src, tgt, unit, compose)?))
}

/// The preorder generated by `relation` (reflexive-transitive closure).
pub fn preorder(n: usize, relation: &[(usize, usize)]) -> Result<Cat> {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in relation {
        le[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let arrows: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| le[i][j]).collect();
    let index = |p: (usize, usize)| arrows.binary_search(&p).expect("closed under composition");
    let units: Vec<usize> = (0..n).map(|i| index((i, i))).collect();
    explicit_category(n, &arrows, &units, |g, f| index((arrows[f].0, arrows[g].1)))
}

/// Disjoint union of connected groupoids: objects `0..n` in the component
/// given by `component[x]`, each component with a cyclic vertex group of
/// the given order.
pub fn groupoid(component: &[usize], orders: &[usize]) -> Result<Cat> {
    let n = component.len();
    let mut arrows = Vec::new();
    let mut label = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if component[a] == component[b] {
                for g in 0..orders[component[a]] {
                    arrows.push((a, b));
                    label.push(g);
                }
            }
        }
    }
    let find = |a: usize, b: usize, g: usize| {
        (0..arrows.len()).find(|&i| arrows[i] == (a, b) && label[i] == g).expect("arrow exists")
    };
    let units: Vec<usize> = (0..n).map(|x| find(x, x, 0)).collect();
    explicit_category(n, &arrows, &units, |g, f| {
        let k = orders[component[arrows[f].0]];
        find(arrows[f].0, arrows[g].1, (label[g] + label[f]) % k)
    })
}

/// The one-object category of a monoid with identity `0`;
/// `mul[a][b]` is `a · b`, read as `a` after `b`.
pub fn monoid(mul: &[Vec<usize>]) -> Result<Cat> {
    let arrows = vec![(0, 0); mul.len()];
    explicit_category(1, &arrows, &[0], |g, f| mul[g][f])
}

fn monoids() -> Vec<(&'static str, Vec<Vec<usize>>)> {
    vec![
        ("idempotent", vec![vec![0, 1], vec![1, 1]]),
        ("null", vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]),
        ("right-zero", vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]),
    ]
}

/// The shipped crossed modules: `t = id` on `Z₂` and `S₃`, and `Z₄ → Z₂`
/// with trivial action.
pub fn crossed_fixtures() -> Vec<Named<CrossedModule>> {
    let z4_z2 = CrossedModule::with_trivial_action(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 0, 1])
        .expect("valid crossed module");
    vec![
        named("id(Z2)", CrossedModule::identity(FiniteGroup::cyclic(2))),
        named("id(Z3)", CrossedModule::identity(FiniteGroup::cyclic(3))),
        named("Z4->Z2", z4_z2),
    ]
}

fn z2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

/// The free `Z₂`-orbit on two points.
pub fn free_orbit() -> Obj {
    Obj::gset(z2(), vec![vec![0, 1], vec![1, 0]]).expect("free action")
}

fn fixture_categories() -> Vec<Named<Cat>> {
    let mut out = vec![
        named("disc(1)", disc(&Obj::set(1))),
        named("disc(2)", disc(&Obj::set(2))),
        named("codisc(2)", codisc(&Obj::set(2))),
        named("codisc(3)", codisc(&Obj::set(3))),
        named("cech(3->2)", cech(&map(3, 2, &[0, 0, 1]))),
        named("B(Z2)", delooping(&FiniteGroup::cyclic(2))),
        named("B(Z3)", delooping(&FiniteGroup::cyclic(3))),
        named("B(S3)", delooping(&FiniteGroup::symmetric3())),
        named("arrow", preorder(2, &[(0, 1)]).expect("preorder")),
    ];
    for (name, table) in monoids() {
        out.push(named(format!("monoid({name})"), monoid(&table).expect("monoid")));
    }
    let z2g = Obj::group(FiniteGroup::cyclic(2));
    out.push(named("disc(Z2)", disc(&z2g)));
    out.push(named("codisc(Z2)", codisc(&z2g)));
    out.push(named("cech(Z4->Z2)", cech(&Arr::new(Obj::group(FiniteGroup::cyclic(4)), z2g, vec![0, 1, 0, 1]).expect("hom"))));
    for xm in crossed_fixtures() {
        out.push(named(format!("xmod({})", xm.name), xmod_to_groupoid(&xm.item).expect("valid crossed module")));
    }
    let orbit = free_orbit();
    let point = Ambient::FinGSet(z2()).terminal();
    out.push(named("disc(Z2-orbit)", disc(&orbit)));
    out.push(named("codisc(Z2-orbit)", codisc(&orbit)));
    out.push(named("cech(Z2-orbit->1)", cech(&Arr::to_terminal(&orbit))));
    out.push(named("codisc(Z2-point)", codisc(&point)));
    out
}

fn find<'a>(cats: &'a [Named<Cat>], name: &str) -> &'a Cat {
    &cats.iter().find(|c| c.name == name).expect("fixture present").item
}

fn fixture_functors(cats: &[Named<Cat>]) -> Vec<Named<InternalFunctor>> {
    let one = find(cats, "disc(1)");
    let d2 = find(cats, "disc(2)");
    let c2 = find(cats, "codisc(2)");
    let c3 = find(cats, "codisc(3)");
    let bang = |x: &Cat| {
        InternalFunctor::new(x.clone(), one.clone(), Arr::to_terminal(x.obj()), Arr::to_terminal(x.arr()))
            .expect("terminal functor")
    };
    let mut out = vec![
        named("point0:1->codisc(2)", into_codiscrete(one, &map(1, 2, &[0])).expect("point")),
        named("point1:1->codisc(2)", into_codiscrete(one, &map(1, 2, &[1])).expect("point")),
        named("codisc(2)->1", bang(c2)),
        named("disc(2)->1", bang(d2)),
        named("codisc(3)->codisc(2)", into_codiscrete(c3, &map(3, 2, &[0, 1, 1])).expect("functor")),
        named("codisc(2)->codisc(3)", into_codiscrete(c2, &map(2, 3, &[2, 0])).expect("functor")),
        named(
            "1->disc(2)",
            InternalFunctor::new(one.clone(), d2.clone(), map(1, 2, &[1]), map(1, 2, &[1])).expect("inclusion"),
        ),
        named("B(Z2)->1", bang(find(cats, "B(Z2)"))),
    ];
    for name in ["codisc(2)", "cech(3->2)", "B(Z3)", "arrow", "codisc(Z2)", "xmod(Z4->Z2)", "codisc(Z2-orbit)"] {
        let x = find(cats, name);
        out.push(named(format!("id:{name}"), InternalFunctor::identity(x)));
        out.push(named(format!("disc->{name}"), from_discrete(x)));
        out.push(named(format!("{name}->codisc"), to_codiscrete(x)));
    }
    out
}

/// A seeded generator over the fixed fixtures.
struct Generator {
    rng: ChaCha8Rng,
    bounds: Bounds,
    covers: BTreeMap<String, Vec<Arr>>,
}

impl Generator {
    fn category(&mut self) -> Option<Named<Cat>> {
        let b = self.bounds;
        let kind = self.rng.gen_range(0..10);
        let n = self.rng.gen_range(1..=b.max_objects.max(1));
        let fits = |c: &Cat| c.obj().size() <= b.max_objects && c.arr().size() <= b.max_arrows;
        let made: Option<Named<Cat>> = match kind {
            0 | 1 => {
                let mut rel = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if i != j && self.rng.gen_bool(0.3) {
                            rel.push((i, j));
                        }
                    }
                }
                Some(named(format!("preorder({n},{rel:?})"), preorder(n, &rel).ok()?))
            }
            2 | 3 => {
                let component: Vec<usize> = (0..n).map(|_| self.rng.gen_range(0..n)).collect();
                let orders: Vec<usize> = (0..n).map(|_| self.rng.gen_range(1..=3)).collect();
                let name = format!("groupoid({component:?},{orders:?})");
                Some(named(name, groupoid(&component, &orders).ok()?))
            }
            4 => {
                let m = self.rng.gen_range(1..=b.max_objects.max(1));
                let table: Vec<usize> = (0..m).map(|_| self.rng.gen_range(0..n)).collect();
                Some(named(format!("cech({table:?})"), cech(&Arr::new(Obj::set(m), Obj::set(n), table).ok()?)))
            }
            5 => {
                let (name, table) = monoids().choose(&mut self.rng).cloned()?;
                Some(named(format!("monoid({name})"), monoid(&table).ok()?))
            }
            6 => {
                if self.rng.gen_bool(0.5) {
                    Some(named(format!("disc({n})"), disc(&Obj::set(n))))
                } else {
                    Some(named(format!("codisc({n})"), codisc(&Obj::set(n))))
                }
            }
            7 => self.group_category(),
            _ => self.gset_category(),
        };
        made.filter(|c| fits(&c.item) && c.item.obj().size() > 0)
    }

    fn group_category(&mut self) -> Option<Named<Cat>> {
        let groups = FiniteGroup::catalogue(4);
        let (gname, g) = groups.choose(&mut self.rng)?.clone();
        match self.rng.gen_range(0..4) {
            0 => Some(named(format!("disc({gname})"), disc(&Obj::group(g)))),
            1 => Some(named(format!("codisc({gname})"), codisc(&Obj::group(g)))),
            2 => {
                let (hname, h) = groups.choose(&mut self.rng)?.clone();
                let hom = g.homs_to(&h).choose(&mut self.rng)?.clone();
                let f = Arr::new(Obj::group(g), Obj::group(h), hom).ok()?;
                Some(named(format!("cech({gname}->{hname})"), cech(&f)))
            }
            _ => {
                // abelian G into abelian H with trivial action
                let (hname, h) = groups.choose(&mut self.rng)?.clone();
                if !g.is_abelian() || !h.is_abelian() {
                    return None;
                }
                let t = g.homs_to(&h).choose(&mut self.rng)?.clone();
                let xm = CrossedModule::with_trivial_action(g, h, t).ok()?;
                Some(named(format!("xmod({gname}->{hname})"), xmod_to_groupoid(&xm).ok()?))
            }
        }
    }

    fn gset_category(&mut self) -> Option<Named<Cat>> {
        let objs = gsets_up_to(&z2(), self.bounds.max_objects);
        let a = objs.iter().filter(|o| o.size() > 0).collect::<Vec<_>>().choose(&mut self.rng).copied()?.clone();
        match self.rng.gen_range(0..3) {
            0 => Some(named(format!("disc(Z2-set {})", a.size()), disc(&a))),
            1 => Some(named(format!("codisc(Z2-set {})", a.size()), codisc(&a))),
            _ => {
                let b = objs.iter().filter(|o| o.size() > 0).collect::<Vec<_>>().choose(&mut self.rng).copied()?.clone();
                let f = homs(&a, &b).ok()?.choose(&mut self.rng)?.clone();
                Some(named(format!("cech(Z2-map {:?})", f.table()), cech(&f)))
            }
        }
    }

    /// A surjective cover of `a` with domain at most `extra` elements
    /// larger (twice as large for groups).
    fn cover(&mut self, a: &Obj, extra: usize) -> Option<Arr> {
        let bound = match a.structure() {
            Structure::Group(_) => (2 * a.size()).min(8),
            _ => a.size() + extra,
        };
        let key = format!("{a:?}/{bound}");
        let list = self
            .covers
            .entry(key)
            .or_insert_with(|| arrows_into(a, bound).into_iter().filter(Arr::is_surjective).collect());
        list.choose(&mut self.rng).cloned()
    }

    fn functor(&mut self, z: &Cat, x: &Cat) -> Option<InternalFunctor> {
        let mut f0s = homs(z.obj(), x.obj()).ok()?;
        f0s.shuffle(&mut self.rng);
        for f0 in f0s.iter().take(8) {
            let found = functors_with_object_map(z, x, f0);
            if let Some(f) = found.choose(&mut self.rng) {
                return Some(f.clone());
            }
        }
        None
    }

    fn anafunctor(&mut self, x: &Cat, y: &Cat, extra: usize) -> Option<Anafunctor> {
        let u = self.cover(x.obj(), extra)?;
        let bc = BaseChange::new(x, &u).ok()?;
        let f = self.functor(bc.cat(), y)?;
        Anafunctor::assemble(x.clone(), y.clone(), u, f).ok()
    }

    /// A transformation out of `f`: towards another random anafunctor when
    /// one exists, else a renaming along a refinement of its cover.
    fn move_from(&mut self, f: &Anafunctor) -> Option<AnaTransformation> {
        for _ in 0..3 {
            if let Some(g) = self.anafunctor(f.src(), f.tgt(), 1) {
                if let Some(ts) = ana_transformations(f, &g, 1 << 14) {
                    if let Some(t) = ts.choose(&mut self.rng) {
                        return Some(t.clone());
                    }
                }
            }
        }
        let k = self.cover(f.cover().dom(), 1)?;
        renaming(f, &k).ok()
    }
}

fn small(c: &Cat, objects: usize, arrows: usize) -> bool {
    c.obj().size() <= objects && c.arr().size() <= arrows && c.obj().size() > 0
}

/// The corpus for `seed`: fixtures, then (unless the object bound is 0)
/// random categories, functors, anafunctors, parallel families and chains.
pub fn corpus_generate(seed: u64, bounds: Bounds) -> Corpus {
    let mut categories = fixture_categories();
    let mut functors = fixture_functors(&categories);
    let crossed = crossed_fixtures();
    let mut gen = Generator { rng: ChaCha8Rng::seed_from_u64(seed), bounds, covers: BTreeMap::new() };
    if bounds.random() {
        let mut made = 0;
        let mut attempts = 0;
        while made < bounds.random_categories && attempts < 50 * bounds.random_categories {
            attempts += 1;
            if let Some(c) = gen.category() {
                categories.push(named(format!("r{made}:{}", c.name), c.item));
                made += 1;
            }
        }
    }
    let fixtures = fixture_categories().len();
    // functors: base-change projections and random functors between pairs
    let mut anafunctors: Vec<Named<Anafunctor>> = Vec::new();
    for i in 0..categories.len() {
        let x = categories[i].item.clone();
        if let Some(u) = gen.cover(x.obj(), 1) {
            if let Ok(bc) = BaseChange::new(&x, &u) {
                if bc.cat().arr().size() <= 3 * bounds.max_arrows.max(10) {
                    functors.push(named(format!("proj:{}[{:?}]", categories[i].name, u.table()), bc.projection()));
                }
            }
        }
    }
    if bounds.random() {
        let pool: Vec<usize> = (0..categories.len()).filter(|&i| small(&categories[i].item, 3, 6)).collect();
        for round in 0..40 {
            let (Some(&i), Some(&j)) = (pool.choose(&mut gen.rng), pool.choose(&mut gen.rng)) else { break };
            let (x, y) = (categories[i].item.clone(), categories[j].item.clone());
            if ambient_of(&x) != ambient_of(&y) {
                continue;
            }
            // several functors per pair, so that parallel pairs occur
            for k in 0..if round % 4 == 0 { 3 } else { 1 } {
                if let Some(f) = gen.functor(&x, &y) {
                    functors.push(named(format!("f{round}.{k}:{}->{}", categories[i].name, categories[j].name), f));
                }
            }
        }
    }
    // anafunctors, parallel families and chains over small FinSet categories
    let tiny: Vec<usize> = (0..categories.len())
        .filter(|&i| ambient_of(&categories[i].item) == Ambient::FinSet && small(&categories[i].item, 2, 4))
        .collect();
    let targets: Vec<usize> = (0..categories.len())
        .filter(|&i| ambient_of(&categories[i].item) == Ambient::FinSet && small(&categories[i].item, 2, 6))
        .collect();
    let ana_rounds = if bounds.random() { 30 } else { 8 };
    for round in 0..ana_rounds {
        let (Some(&i), Some(&j)) = (tiny.choose(&mut gen.rng), targets.choose(&mut gen.rng)) else { break };
        let (x, y) = (categories[i].item.clone(), categories[j].item.clone());
        if let Some(a) = gen.anafunctor(&x, &y, 1) {
            anafunctors.push(named(format!("ana{round}:{}->{}", categories[i].name, categories[j].name), a));
        }
    }
    for f in &functors {
        if small(f.item.dom(), 3, 9) && small(f.item.cod(), 4, 10) {
            anafunctors.push(named(format!("alpha({})", f.name), Anafunctor::from_functor(&f.item)));
        }
    }
    let family_rounds = if bounds.random() { 12 } else { 4 };
    let mut families = Vec::new();
    for _ in 0..family_rounds {
        let (Some(&i), Some(&j)) = (tiny.choose(&mut gen.rng), targets.choose(&mut gen.rng)) else { break };
        let (x, y) = (categories[i].item.clone(), categories[j].item.clone());
        if x.obj().size() > 2 {
            continue;
        }
        let fam: Vec<Anafunctor> = (0..3).filter_map(|_| gen.anafunctor(&x, &y, 1)).collect();
        if fam.len() >= 2 {
            families.push(fam);
        }
    }
    let chain_rounds = if bounds.random() { 6 } else { 2 };
    let mut chains = Vec::new();
    for _ in 0..chain_rounds {
        let stops: Vec<Cat> = (0..5).filter_map(|_| tiny.choose(&mut gen.rng).map(|&i| categories[i].item.clone())).collect();
        if stops.len() < 5 {
            break;
        }
        let links: Vec<Anafunctor> = stops.windows(2).filter_map(|w| gen.anafunctor(&w[0], &w[1], 1)).collect();
        if links.len() < 4 {
            continue;
        }
        let mut moves = Vec::new();
        for f in &links {
            let Some(a) = gen.move_from(f) else { break };
            let Some(b) = gen.move_from(a.tgt()) else { break };
            moves.push([a, b]);
        }
        if moves.len() == 4 {
            chains.push(Chain { links, moves });
        }
    }
    debug_assert!(categories.len() >= fixtures);
    Corpus { seed, bounds, categories, functors, anafunctors, families, chains, crossed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_validate() {
        let p = preorder(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.arr().size(), 6);
        assert!(p.validate().is_ok());
        let g = groupoid(&[0, 0, 1], &[2, 1]).unwrap();
        assert_eq!(g.arr().size(), 9);
        assert!(g.validate_groupoid().is_ok());
        for (_, t) in monoids() {
            assert!(monoid(&t).unwrap().validate().is_ok());
        }
    }

    #[test]
    fn fixtures_only_is_deterministic_and_small() {
        let a = corpus_generate(7, Bounds::fixtures_only());
        let b = corpus_generate(7, Bounds::fixtures_only());
        assert_eq!(a.categories.len(), fixture_categories().len());
        let names = |c: &Corpus| c.anafunctors.iter().map(|a| a.name.clone()).collect::<Vec<_>>();
        assert_eq!(names(&a), names(&b));
        assert_eq!(a.summary(), b.summary());
    }
}
