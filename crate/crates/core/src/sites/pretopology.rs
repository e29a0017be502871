//! Singleton pretopologies as decidable arrow classes with finite
//! generator lists.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::family::FamilyPretopology;
use crate::ambient::{arrows_into, lift, pullback, Ambient, Arr, Obj};
use crate::error::{Error, Result};

/// Size bound for generator domains and exhaustive checks.
pub const DEFAULT_BOUND: usize = 4;

/// The arrow classes a singleton pretopology can be built from.
#[derive(Debug, Clone)]
pub enum CoverClass {
    /// Isomorphisms only (`triv`).
    Isos,
    /// Surjective arrows; in finite groups these are the epimorphisms.
    Surjections,
    SplitEpis,
    All,
    /// Literal identities; fails the iso axiom, kept as a negative example.
    Identities,
    /// An explicit finite list of arrows.
    Listed(Vec<Arr>),
    /// `∐J` for a family pretopology `J`.
    CoproductOf(Arc<FamilyPretopology>),
}

/// A singleton pretopology on one of the shipped ambients.
///
/// Existential statements ("there is a cover such that ...") range over
/// [`generators`](Self::generators): the members whose domain is a probe
/// object of size at most `bound`, one per class under automorphisms of the
/// domain, plus the identity of the object itself when it is a member.
pub struct Pretopology {
    name: String,
    ambient: Ambient,
    class: CoverClass,
    bound: usize,
    cache: Mutex<HashMap<Obj, Arc<Vec<Arr>>>>,
}

impl fmt::Debug for Pretopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pretopology")
            .field("name", &self.name)
            .field("ambient", &self.ambient)
            .field("class", &self.class)
            .field("bound", &self.bound)
            .finish()
    }
}

impl Clone for Pretopology {
    fn clone(&self) -> Self {
        Self::new(self.name.clone(), self.ambient.clone(), self.class.clone(), self.bound)
    }
}

impl Pretopology {
    pub fn new(name: impl Into<String>, ambient: Ambient, class: CoverClass, bound: usize) -> Self {
        Self { name: name.into(), ambient, class, bound, cache: Mutex::new(HashMap::new()) }
    }

    pub fn triv(ambient: Ambient) -> Self {
        Self::new("triv", ambient, CoverClass::Isos, DEFAULT_BOUND)
    }

    pub fn surjections(ambient: Ambient) -> Self {
        Self::new("surj", ambient, CoverClass::Surjections, DEFAULT_BOUND)
    }

    pub fn split_epis(ambient: Ambient) -> Self {
        Self::new("split", ambient, CoverClass::SplitEpis, DEFAULT_BOUND)
    }

    pub fn all_arrows(ambient: Ambient) -> Self {
        Self::new("all", ambient, CoverClass::All, DEFAULT_BOUND)
    }

    pub fn identities(ambient: Ambient) -> Self {
        Self::new("identities", ambient, CoverClass::Identities, DEFAULT_BOUND)
    }

    /// Epimorphisms (surjective homomorphisms) of finite groups, with
    /// generators drawn from all groups of order at most 8.
    pub fn epi_grp() -> Self {
        Self::new("epi-grp", Ambient::FinGrp, CoverClass::Surjections, 8)
    }

    pub fn listed(name: impl Into<String>, ambient: Ambient, arrows: Vec<Arr>) -> Self {
        Self::new(name, ambient, CoverClass::Listed(arrows), DEFAULT_BOUND)
    }

    /// The singleton pretopology `∐J` of coproducts of covering families.
    pub fn coproduct_of(family: Arc<FamilyPretopology>) -> Result<Self> {
        if family.ambient() != &Ambient::FinSet {
            return Err(Error::Unsupported("coproducts"));
        }
        let name = format!("coprod-of:{}", family.name());
        let bound = family.bound();
        Ok(Self::new(name, Ambient::FinSet, CoverClass::CoproductOf(family), bound))
    }

    /// Looks up `triv`, `surj`, `split`, `all`, `epi-grp` or
    /// `coprod-of:<family>` over `ambient`.
    pub fn named(name: &str, ambient: Ambient) -> Result<Self> {
        if let Some(family) = name.strip_prefix("coprod-of:") {
            return Self::coproduct_of(Arc::new(FamilyPretopology::named(family, ambient)?));
        }
        Ok(match name {
            "triv" => Self::triv(ambient),
            "surj" => Self::surjections(ambient),
            "split" => Self::split_epis(ambient),
            "all" => Self::all_arrows(ambient),
            "epi-grp" if ambient == Ambient::FinGrp => Self::epi_grp(),
            "epi-grp" => return Err(Error::Precondition(format!("epi-grp needs FinGrp, not {}", ambient.name()))),
            _ => return Err(Error::Invalid(format!("unknown pretopology `{name}`"))),
        })
    }

    pub fn with_bound(self, bound: usize) -> Self {
        Self::new(self.name, self.ambient, self.class, bound)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn class(&self) -> &CoverClass {
        &self.class
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Membership of an arbitrary arrow in the class.
    pub fn contains(&self, f: &Arr) -> bool {
        if !self.ambient.contains(f.cod()) {
            return false;
        }
        match &self.class {
            CoverClass::Isos => f.is_iso(),
            CoverClass::Surjections => f.is_surjective(),
            CoverClass::SplitEpis => lift(&Arr::identity(f.cod()), f).is_some(),
            CoverClass::All => true,
            CoverClass::Identities => f.is_identity(),
            CoverClass::Listed(list) => list.contains(f),
            CoverClass::CoproductOf(family) => family.coproduct_contains(f),
        }
    }

    /// Generator covers of `a`, ordered by domain size and then table.
    pub fn generators(&self, a: &Obj) -> Arc<Vec<Arr>> {
        if let Some(g) = self.cache.lock().expect("generator cache").get(a) {
            return g.clone();
        }
        let mut gens: Vec<Arr> = match &self.class {
            CoverClass::Listed(list) => list.iter().filter(|c| c.cod() == a).cloned().collect(),
            _ => arrows_into(a, self.bound).into_iter().filter(|c| self.contains(c)).collect(),
        };
        let id = Arr::identity(a);
        if self.contains(&id) && !gens.contains(&id) {
            gens.push(id);
        }
        let gens = Arc::new(gens);
        self.cache.lock().expect("generator cache").insert(a.clone(), gens.clone());
        gens
    }

    /// A generator cover of `cod(f)` together with a lift through `f`.
    pub fn epi_witness(&self, f: &Arr) -> Option<(Arr, Arr)> {
        self.generators(f.cod()).iter().find_map(|c| lift(c, f).map(|l| (c.clone(), l)))
    }

    /// `f` is a J-epimorphism: some generator cover of its codomain lifts
    /// through it.
    pub fn is_epi(&self, f: &Arr) -> bool {
        self.epi_witness(f).is_some()
    }

    /// `f` and all its pullbacks along arrows from objects of size at most
    /// `bound` are J-epimorphisms.
    pub fn is_universal_epi(&self, f: &Arr, bound: usize) -> bool {
        self.universal_epi_failure(f, bound).is_none()
    }

    /// The first arrow along which the pullback of `f` fails to be a
    /// J-epimorphism (`None` when `f` is universal within the bound).
    pub fn universal_epi_failure(&self, f: &Arr, bound: usize) -> Option<Arr> {
        if !self.is_epi(f) {
            return Some(Arr::identity(f.cod()));
        }
        arrows_into(f.cod(), bound).into_iter().find(|g| {
            let pb = pullback(g, f).expect("shared codomain");
            !self.is_epi(&pb.proj1)
        })
    }
}

impl fmt::Display for Pretopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.name, self.ambient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::FiniteGroup;

    fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
        Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).unwrap()
    }

    #[test]
    fn membership() {
        let surj = Pretopology::surjections(Ambient::FinSet);
        assert!(surj.contains(&map(3, 2, &[0, 0, 1])));
        assert!(!surj.contains(&map(1, 2, &[1])));
        let triv = Pretopology::triv(Ambient::FinSet);
        assert!(triv.contains(&map(2, 2, &[1, 0])));
        assert!(!triv.contains(&map(3, 2, &[0, 0, 1])));
        let epi = Pretopology::epi_grp();
        let z4 = Obj::group(FiniteGroup::cyclic(4));
        let z2 = Obj::group(FiniteGroup::cyclic(2));
        assert!(epi.contains(&Arr::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap()));
        assert!(!epi.contains(&Arr::new(z2, z4, vec![0, 2]).unwrap()));
    }

    #[test]
    fn generators_of_two() {
        let surj = Pretopology::surjections(Ambient::FinSet);
        let gens = surj.generators(&Obj::set(2));
        let tables: Vec<_> = gens.iter().map(|g| g.table().to_vec()).collect();
        assert_eq!(
            tables,
            vec![vec![0, 1], vec![0, 0, 1], vec![0, 1, 1], vec![0, 0, 0, 1], vec![0, 0, 1, 1], vec![0, 1, 1, 1]]
        );
        let triv = Pretopology::triv(Ambient::FinSet);
        assert_eq!(triv.generators(&Obj::set(7)).as_slice(), &[Arr::identity(&Obj::set(7))]);
        assert_eq!(surj.generators(&Obj::set(7)).as_slice(), &[Arr::identity(&Obj::set(7))]);
    }

    #[test]
    fn epis() {
        let surj = Pretopology::surjections(Ambient::FinSet);
        assert!(!surj.is_epi(&map(1, 2, &[0])));
        assert!(surj.is_epi(&map(3, 2, &[0, 1, 0])));
        let triv = Pretopology::triv(Ambient::FinSet);
        // a split epimorphism is a triv-epimorphism
        assert!(triv.is_epi(&map(3, 2, &[0, 1, 0])));
        assert!(triv.is_universal_epi(&map(3, 2, &[0, 1, 0]), 4));
        assert!(!triv.is_universal_epi(&map(1, 2, &[0]), 4));
        assert!(triv.is_universal_epi(&map(2, 2, &[1, 0]), 4));
    }
}
