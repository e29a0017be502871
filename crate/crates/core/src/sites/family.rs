//! Pretopologies of covering families and the coproduct construction.

use std::sync::Arc;

use super::pretopology::{Pretopology, DEFAULT_BOUND};
use crate::ambient::{lift, pullback, Ambient, Arr, Obj};
use crate::error::{Error, Result};

/// The families a [`FamilyPretopology`] admits.
#[derive(Debug, Clone)]
pub enum FamilyClass {
    /// Families whose images cover the base.
    JointlySurjective,
    /// Jointly surjective families of injections: the analogue of open
    /// covers by subsets.
    CoveringSubsets,
    /// One-member families drawn from a singleton pretopology.
    Singletons(Arc<Pretopology>),
}

/// Which generator families are kept; membership is unaffected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorFilter {
    All,
    /// Only families all of whose members are proper subobjects. Used to
    /// build a deliberately deficient basis.
    ProperMembers,
}

/// A pretopology of covering families over FinSet (or any shipped ambient
/// for [`FamilyClass::Singletons`]).
#[derive(Debug, Clone)]
pub struct FamilyPretopology {
    name: String,
    ambient: Ambient,
    class: FamilyClass,
    filter: GeneratorFilter,
    bound: usize,
}

impl FamilyPretopology {
    pub fn jointly_surjective() -> Self {
        Self::new("jointly-surjective", FamilyClass::JointlySurjective)
    }

    pub fn covering_subsets() -> Self {
        Self::new("covering-subsets", FamilyClass::CoveringSubsets)
    }

    /// A singleton pretopology regarded as a family pretopology.
    pub fn singletons(j: Arc<Pretopology>) -> Self {
        let name = format!("singletons:{}", j.name());
        let ambient = j.ambient().clone();
        let bound = j.bound();
        Self { name, ambient, class: FamilyClass::Singletons(j), filter: GeneratorFilter::All, bound }
    }

    /// `jointly-surjective`, `covering-subsets` or `singletons:<pretopology>`.
    pub fn named(name: &str, ambient: Ambient) -> Result<Self> {
        if let Some(j) = name.strip_prefix("singletons:") {
            return Ok(Self::singletons(Arc::new(Pretopology::named(j, ambient)?)));
        }
        if ambient != Ambient::FinSet {
            return Err(Error::Unsupported("families outside FinSet"));
        }
        match name {
            "jointly-surjective" => Ok(Self::jointly_surjective()),
            "covering-subsets" => Ok(Self::covering_subsets()),
            _ => Err(Error::Invalid(format!("unknown family pretopology `{name}`"))),
        }
    }

    fn new(name: &str, class: FamilyClass) -> Self {
        Self { name: name.into(), ambient: Ambient::FinSet, class, filter: GeneratorFilter::All, bound: DEFAULT_BOUND }
    }

    pub fn with_filter(mut self, filter: GeneratorFilter) -> Self {
        if filter != GeneratorFilter::All {
            self.name = format!("{}[proper]", self.name);
        }
        self.filter = filter;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn class(&self) -> &FamilyClass {
        &self.class
    }

    /// Whether `members` (all into `base`) form a covering family.
    pub fn contains_family(&self, base: &Obj, members: &[Arr]) -> bool {
        if members.iter().any(|m| m.cod() != base) || !self.ambient.contains(base) {
            return false;
        }
        match &self.class {
            FamilyClass::JointlySurjective => jointly_surjective(base, members),
            FamilyClass::CoveringSubsets => {
                members.iter().all(Arr::is_injective) && jointly_surjective(base, members)
            }
            FamilyClass::Singletons(j) => members.len() == 1 && j.contains(&members[0]),
        }
    }

    /// Generator families of `base`.
    pub fn generators(&self, base: &Obj) -> Vec<Vec<Arr>> {
        let mut fams = match &self.class {
            FamilyClass::Singletons(j) => j.generators(base).iter().map(|c| vec![c.clone()]).collect(),
            FamilyClass::JointlySurjective | FamilyClass::CoveringSubsets => subset_covers(base),
        };
        if self.filter == GeneratorFilter::ProperMembers {
            fams.retain(|fam| fam.iter().all(|m| m.dom().size() < base.size()));
        }
        fams
    }

    /// A generator family of `cod(f)` each member of which lifts through `f`.
    pub fn epi_witness(&self, f: &Arr) -> Option<Vec<Arr>> {
        self.generators(f.cod())
            .into_iter()
            .find(|fam| fam.iter().all(|m| lift(m, f).is_some()))
    }

    pub fn is_epi(&self, f: &Arr) -> bool {
        let fams = self.generators(f.cod());
        // Each distinct member is tested once.
        let mut members: Vec<&Arr> = fams.iter().flatten().collect();
        members.sort_by(|a, b| (a.dom().size(), a.table()).cmp(&(b.dom().size(), b.table())));
        members.dedup();
        let liftable: Vec<bool> = members.iter().map(|m| lift(m, f).is_some()).collect();
        fams.iter().any(|fam| {
            fam.iter().all(|m| {
                let i = members.iter().position(|x| *x == m).expect("listed");
                liftable[i]
            })
        })
    }

    pub fn is_universal_epi(&self, f: &Arr, bound: usize) -> bool {
        self.is_epi(f)
            && crate::ambient::arrows_into(f.cod(), bound).iter().all(|g| {
                let pb = pullback(g, f).expect("shared codomain");
                self.is_epi(&pb.proj1)
            })
    }

    /// Whether `f: V → A` is the copairing of some covering family, i.e.
    /// `V` splits into blocks whose restrictions of `f` cover `A`.
    ///
    /// All block decompositions are tried for domains of at most six
    /// elements; beyond that only the discrete and the one-block
    /// decompositions, which decide membership for every shipped class
    /// (jointly surjective classes are closed under refining a family into
    /// points, singleton classes only admit one block).
    pub fn coproduct_contains(&self, f: &Arr) -> bool {
        let n = f.dom().size();
        let try_blocks = |blocks: &[Vec<usize>]| -> bool {
            let members: Option<Vec<Arr>> = blocks
                .iter()
                .map(|b| f.dom().subobject(b).ok().map(|inc| crate::ambient::comp(f, &inc)))
                .collect();
            members.is_some_and(|m| self.contains_family(f.cod(), &m))
        };
        let whole: Vec<Vec<usize>> = vec![(0..n).collect()];
        let points: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        if try_blocks(&points) || try_blocks(&whole) {
            return true;
        }
        n <= 6 && set_partitions(n).iter().any(|p| try_blocks(p))
    }

    /// The coproduct `⊔ U_i → A` of a family.
    pub fn copair(&self, base: &Obj, members: &[Arr]) -> Result<Arr> {
        if members.is_empty() {
            return Arr::new(Obj::set(0), base.clone(), Vec::new());
        }
        let doms: Vec<Obj> = members.iter().map(|m| m.dom().clone()).collect();
        crate::ambient::coproduct(&doms)?.copair(members)
    }
}

fn jointly_surjective(base: &Obj, members: &[Arr]) -> bool {
    let mut hit = vec![false; base.size()];
    for m in members {
        for &y in m.table() {
            hit[y] = true;
        }
    }
    hit.into_iter().all(|b| b)
}

/// Families of nonempty subsets (as inclusions) covering `base`, with at
/// most `|base|` members, in lexicographic order of their member lists.
fn subset_covers(base: &Obj) -> Vec<Vec<Arr>> {
    let n = base.size();
    if n == 0 {
        return vec![Vec::new()];
    }
    let full = (1usize << n) - 1;
    let masks: Vec<usize> = (1..=full).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(masks: &[usize], start: usize, cover: usize, full: usize, max: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cover == full {
            out.push(chosen.clone());
        }
        if chosen.len() == max {
            return;
        }
        for i in start..masks.len() {
            chosen.push(masks[i]);
            rec(masks, i + 1, cover | masks[i], full, max, chosen, out);
            chosen.pop();
        }
    }
    let mut fams = Vec::new();
    rec(&masks, 0, 0, full, n, &mut chosen, &mut fams);
    for fam in fams {
        let members: Vec<Arr> = fam
            .iter()
            .map(|&mask| {
                let elems: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                base.subobject(&elems).expect("subset of a set")
            })
            .collect();
        out.push(members);
    }
    out
}

/// All partitions of `0..n` into nonempty blocks, blocks in order of their
/// least element.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(x: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if x == n {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(x);
            rec(x + 1, n, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![x]);
        rec(x + 1, n, blocks, out);
        blocks.pop();
    }
    rec(0, n, &mut blocks, &mut out);
    out
}

/// Fails for ambients without coproducts.
pub fn coproduct_pretopology(family: FamilyPretopology) -> Result<Pretopology> {
    if !family.ambient().supports_coproducts() || family.ambient() != &Ambient::FinSet {
        return Err(Error::Unsupported("coproducts"));
    }
    Pretopology::coproduct_of(Arc::new(family))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
        Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).unwrap()
    }

    #[test]
    fn partitions_are_counted_by_bell_numbers() {
        let bell: Vec<usize> = (0..=5).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn families() {
        let js = FamilyPretopology::jointly_surjective();
        let two = Obj::set(2);
        let fam = vec![Arr::identity(&two), map(1, 2, &[1])];
        assert!(js.contains_family(&two, &fam));
        assert!(!js.contains_family(&two, &[map(1, 2, &[1])]));
        let cover = js.copair(&two, &fam).unwrap();
        assert_eq!(cover.dom().size(), 3);
        assert_eq!(cover.table(), &[0, 1, 1]);
        assert_eq!(subset_covers(&two).len(), 4);
        assert_eq!(subset_covers(&Obj::set(0)).len(), 1);
    }

    #[test]
    fn coproduct_class_is_surjections() {
        let coprod = coproduct_pretopology(FamilyPretopology::jointly_surjective()).unwrap();
        for n in 0..=3 {
            for m in 0..=3 {
                for f in crate::ambient::homs(&Obj::set(n), &Obj::set(m)).unwrap() {
                    assert_eq!(coprod.contains(&f), f.is_surjective());
                }
            }
        }
    }

    #[test]
    fn restricted_generators_lose_the_point() {
        let fam = FamilyPretopology::covering_subsets().with_filter(GeneratorFilter::ProperMembers);
        assert!(fam.generators(&Obj::set(1)).is_empty());
        assert_eq!(fam.generators(&Obj::set(0)).len(), 1);
        assert!(!fam.is_epi(&Arr::identity(&Obj::set(1))));
    }

    #[test]
    fn epis_agree_with_surjectivity() {
        let fam = FamilyPretopology::covering_subsets();
        for n in 0..=3 {
            for m in 0..=3 {
                for f in crate::ambient::homs(&Obj::set(n), &Obj::set(m)).unwrap() {
                    assert_eq!(fam.is_epi(&f), f.is_surjective());
                    assert_eq!(fam.epi_witness(&f).is_some(), f.is_surjective());
                }
            }
        }
    }
}
