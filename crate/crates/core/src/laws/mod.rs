//! Corpus generation and the law suites run over it.
//!
//! Every law has an entry in [`LawId`] and a check in [`run_law`]; the
//! match there is exhaustive, so a law without a check does not compile.

mod appendix;
mod bicategory;
pub mod corpus;
mod fractions;
mod lemmas;
mod localisation;
mod sites;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use corpus::{corpus_generate, Bounds, Corpus};

use crate::ambient::{Ambient, Arr};
use crate::internal::{classify, essential_image, splitting_through, BaseChange, Cat, InternalCategory, InternalFunctor, LocalSplitting, NaturalTransformation, Verdict};
use crate::report::{Check, Status, VerificationReport};
use crate::sites::Pretopology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Bicategory,
    Fractions,
    Localisation,
    Lemmas,
    Sites,
    Appendix,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Bicategory, Suite::Fractions, Suite::Localisation, Suite::Lemmas, Suite::Sites, Suite::Appendix];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bicategory => "bicategory",
            Suite::Fractions => "fractions",
            Suite::Localisation => "localisation",
            Suite::Lemmas => "lemmas",
            Suite::Sites => "sites",
            Suite::Appendix => "appendix",
        }
    }

    pub fn laws(self) -> impl Iterator<Item = LawId> {
        LawId::ALL.into_iter().filter(move |l| l.suite() == self)
    }

    pub fn faults(self) -> impl Iterator<Item = FaultClass> {
        FaultClass::ALL.into_iter().filter(move |f| f.suite() == self)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawId {
    Pentagon,
    UnitStrictness,
    AssociatorNaturality,
    Interchange,
    VerticalAssociativity,
    EquivalencesAreWeak,
    CompositionClosed,
    IsoClosed,
    SquareFilling,
    TwoCellLifting,
    EssentiallySurjective,
    Factorisation,
    LocallyFullyFaithful,
    ConstructionValidity,
    BaseChangeCoherence,
    DescentOracle,
    BungePareAgreement,
    Pseudoinverse,
    FullyFaithfulIsoClosed,
    RepresentablyFullyFaithful,
    StrictPullbackOfBaseChange,
    FunctorImagesCompose,
    AnafunctorRecognition,
    CrossedModules,
    PretopologyAxioms,
    Saturation,
    Subcanonicity,
    SubcanonicalUpCofinal,
    CofinalEquivalence,
    Wisc,
    Extensivity,
    CoproductAxioms,
    SubcanonicityTransfer,
    UniversalEpisAgree,
}

impl LawId {
    pub const ALL: [LawId; 34] = [
        LawId::Pentagon,
        LawId::UnitStrictness,
        LawId::AssociatorNaturality,
        LawId::Interchange,
        LawId::VerticalAssociativity,
        LawId::EquivalencesAreWeak,
        LawId::CompositionClosed,
        LawId::IsoClosed,
        LawId::SquareFilling,
        LawId::TwoCellLifting,
        LawId::EssentiallySurjective,
        LawId::Factorisation,
        LawId::LocallyFullyFaithful,
        LawId::ConstructionValidity,
        LawId::BaseChangeCoherence,
        LawId::DescentOracle,
        LawId::BungePareAgreement,
        LawId::Pseudoinverse,
        LawId::FullyFaithfulIsoClosed,
        LawId::RepresentablyFullyFaithful,
        LawId::StrictPullbackOfBaseChange,
        LawId::FunctorImagesCompose,
        LawId::AnafunctorRecognition,
        LawId::CrossedModules,
        LawId::PretopologyAxioms,
        LawId::Saturation,
        LawId::Subcanonicity,
        LawId::SubcanonicalUpCofinal,
        LawId::CofinalEquivalence,
        LawId::Wisc,
        LawId::Extensivity,
        LawId::CoproductAxioms,
        LawId::SubcanonicityTransfer,
        LawId::UniversalEpisAgree,
    ];

    pub fn suite(self) -> Suite {
        use LawId::*;
        match self {
            Pentagon | UnitStrictness | AssociatorNaturality | Interchange | VerticalAssociativity => Suite::Bicategory,
            EquivalencesAreWeak | CompositionClosed | IsoClosed | SquareFilling | TwoCellLifting => Suite::Fractions,
            EssentiallySurjective | Factorisation | LocallyFullyFaithful => Suite::Localisation,
            ConstructionValidity | BaseChangeCoherence | DescentOracle | BungePareAgreement | Pseudoinverse
            | FullyFaithfulIsoClosed | RepresentablyFullyFaithful | StrictPullbackOfBaseChange
            | FunctorImagesCompose | AnafunctorRecognition | CrossedModules => Suite::Lemmas,
            PretopologyAxioms | Saturation | Subcanonicity | SubcanonicalUpCofinal | CofinalEquivalence | Wisc => {
                Suite::Sites
            }
            Extensivity | CoproductAxioms | SubcanonicityTransfer | UniversalEpisAgree => Suite::Appendix,
        }
    }

    pub fn name(self) -> &'static str {
        use LawId::*;
        match self {
            Pentagon => "pentagon",
            UnitStrictness => "unit-strictness",
            AssociatorNaturality => "associator-naturality",
            Interchange => "interchange",
            VerticalAssociativity => "vertical-associativity",
            EquivalencesAreWeak => "equivalences-are-weak",
            CompositionClosed => "composition-closed",
            IsoClosed => "iso-closed",
            SquareFilling => "square-filling",
            TwoCellLifting => "two-cell-lifting",
            EssentiallySurjective => "essentially-surjective",
            Factorisation => "factorisation",
            LocallyFullyFaithful => "locally-fully-faithful",
            ConstructionValidity => "construction-validity",
            BaseChangeCoherence => "base-change-coherence",
            DescentOracle => "descent-oracle",
            BungePareAgreement => "bunge-pare-agreement",
            Pseudoinverse => "pseudoinverse",
            FullyFaithfulIsoClosed => "fully-faithful-iso-closed",
            RepresentablyFullyFaithful => "representably-fully-faithful",
            StrictPullbackOfBaseChange => "strict-pullback-of-base-change",
            FunctorImagesCompose => "functor-images-compose",
            AnafunctorRecognition => "anafunctor-recognition",
            CrossedModules => "crossed-modules",
            PretopologyAxioms => "pretopology-axioms",
            Saturation => "saturation",
            Subcanonicity => "subcanonicity",
            SubcanonicalUpCofinal => "subcanonical-up-cofinal",
            CofinalEquivalence => "cofinal-equivalence",
            Wisc => "wisc",
            Extensivity => "extensivity",
            CoproductAxioms => "coproduct-axioms",
            SubcanonicityTransfer => "subcanonicity-transfer",
            UniversalEpisAgree => "universal-epis-agree",
        }
    }

    /// `suite/name`, as it appears in reports.
    pub fn qualified(self) -> String {
        format!("{}/{}", self.suite().name(), self.name())
    }
}

impl FromStr for LawId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LawId::ALL
            .into_iter()
            .find(|l| l.name() == s || l.qualified() == s)
            .ok_or_else(|| format!("unknown law `{s}`"))
    }
}

/// Deliberate corruptions, each applied to one suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultClass {
    /// One associator component replaced.
    Associator,
    /// One component of every vertical composite replaced.
    VerticalComposition,
    /// One splitting isomorphism replaced before it is used.
    Splitting,
    /// The inverse of a base-change projection renamed along a
    /// permutation of its cover.
    RenamedInverse,
    /// The Bunge–Paré classifier's answer negated.
    Classifier,
    /// A crossed module with an action violating the Peiffer identity.
    CrossedAction,
    /// The identities substituted for each pretopology.
    Pretopology,
    /// A family pretopology whose generators omit the identity families.
    Family,
}

impl FaultClass {
    pub const ALL: [FaultClass; 8] = [
        FaultClass::Associator,
        FaultClass::VerticalComposition,
        FaultClass::Splitting,
        FaultClass::RenamedInverse,
        FaultClass::Classifier,
        FaultClass::CrossedAction,
        FaultClass::Pretopology,
        FaultClass::Family,
    ];

    pub fn suite(self) -> Suite {
        match self {
            FaultClass::Associator | FaultClass::VerticalComposition => Suite::Bicategory,
            FaultClass::Splitting => Suite::Fractions,
            FaultClass::RenamedInverse => Suite::Localisation,
            FaultClass::Classifier | FaultClass::CrossedAction => Suite::Lemmas,
            FaultClass::Pretopology => Suite::Sites,
            FaultClass::Family => Suite::Appendix,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FaultClass::Associator => "associator",
            FaultClass::VerticalComposition => "vertical-composition",
            FaultClass::Splitting => "splitting",
            FaultClass::RenamedInverse => "renamed-inverse",
            FaultClass::Classifier => "classifier",
            FaultClass::CrossedAction => "crossed-action",
            FaultClass::Pretopology => "pretopology",
            FaultClass::Family => "family",
        }
    }
}

impl fmt::Display for FaultClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FaultClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FaultClass::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown fault class `{s}`"))
    }
}

/// Shared state for one run: the corpus, the injected fault and one
/// pretopology per ambient (so generator caches are reused).
pub struct Context<'a> {
    pub corpus: &'a Corpus,
    pub fault: Option<FaultClass>,
    pretopologies: Vec<(Ambient, Pretopology)>,
}

impl<'a> Context<'a> {
    pub fn new(corpus: &'a Corpus, fault: Option<FaultClass>) -> Self {
        let mut pretopologies = vec![
            (Ambient::FinSet, Pretopology::surjections(Ambient::FinSet)),
            (Ambient::FinGrp, Pretopology::epi_grp()),
        ];
        for c in &corpus.categories {
            let a = corpus::ambient_of(&c.item);
            if !pretopologies.iter().any(|(b, _)| *b == a) {
                pretopologies.push((a.clone(), Pretopology::surjections(a)));
            }
        }
        Self { corpus, fault, pretopologies }
    }

    /// The surjections of the ambient of `x` (epimorphisms, for groups).
    pub fn j(&self, x: &InternalCategory) -> &Pretopology {
        let a = corpus::ambient_of(x);
        &self.pretopologies.iter().find(|(b, _)| *b == a).expect("every corpus ambient is registered").1
    }

    pub fn pretopologies(&self) -> impl Iterator<Item = &Pretopology> {
        self.pretopologies.iter().map(|(_, j)| j)
    }

    pub fn faulty(&self, f: FaultClass) -> bool {
        self.fault == Some(f)
    }

    /// The object bound of the corpus, reported as the bound of corpus
    /// sweeps.
    pub fn bound(&self) -> usize {
        self.corpus.bounds.max_objects
    }

    /// The classifier's splitting of `f`, if it is a J-equivalence. Under
    /// the splitting fault one component of `ι` is replaced.
    pub(crate) fn splitting(&self, f: &InternalFunctor) -> Option<LocalSplitting> {
        let Verdict::Equivalence { witness } = classify(f, self.j(f.cod())) else { return None };
        let mut w = *witness;
        if self.faulty(FaultClass::Splitting) {
            let mut table = w.iota.component().table().to_vec();
            perturb(f.cod(), &mut table);
            let c = Arr::trusted(w.iota.component().dom().clone(), f.cod().arr().clone(), table);
            w.iota = NaturalTransformation::assemble(w.iota.src().clone(), w.iota.tgt().clone(), c)
                .expect("same shape");
        }
        Some(w)
    }

    /// A generator private to `law`, so laws draw independent samples.
    pub fn rng(&self, law: LawId) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.corpus.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ law as u64)
    }
}

/// Replaces `table[0]` by a different arrow of `y`, preferring one with a
/// different target.
pub(crate) fn perturb(y: &InternalCategory, table: &mut [usize]) {
    let Some(first) = table.first().copied() else { return };
    let other = y
        .arr()
        .elements()
        .find(|&a| y.t(a) != y.t(first))
        .or_else(|| y.arr().elements().find(|&a| a != first));
    if let Some(o) = other {
        table[0] = o;
    }
}

/// A functor isomorphic to `f`, moved along randomly chosen isomorphisms
/// `c(x): f x → g x`, together with the isomorphism `f ⇒ g`. Only for
/// categories in FinSet, where any choice of objects is a morphism.
pub(crate) fn conjugate(f: &InternalFunctor, rng: &mut impl Rng) -> Option<(InternalFunctor, NaturalTransformation)> {
    let (x, y) = (f.dom(), f.cod());
    if corpus::ambient_of(x) != Ambient::FinSet || corpus::ambient_of(y) != Ambient::FinSet {
        return None;
    }
    let c: Vec<usize> = x
        .obj()
        .elements()
        .map(|o| {
            let isos: Vec<usize> =
                y.arr().elements().filter(|&a| y.s(a) == f.f0().at(o) && y.inverse_of(a).is_some()).collect();
            *isos.choose(rng).expect("units are isomorphisms")
        })
        .collect();
    let g0 = c.iter().map(|&a| y.t(a)).collect();
    let g1 = x
        .arr()
        .elements()
        .map(|h| {
            let back = y.inverse_of(c[x.s(h)]).expect("chosen invertible");
            y.m(c[x.t(h)], y.m(f.f1().at(h), back))
        })
        .collect();
    let g = InternalFunctor::new(
        x.clone(),
        y.clone(),
        Arr::new(x.obj().clone(), y.obj().clone(), g0).ok()?,
        Arr::new(x.arr().clone(), y.arr().clone(), g1).ok()?,
    )
    .ok()?;
    let alpha = NaturalTransformation::new(f.clone(), g.clone(), Arr::new(x.obj().clone(), y.arr().clone(), c).ok()?).ok()?;
    Some((g, alpha))
}

/// The splitting of a base-change projection `X[U] → X` on its own cover
/// `u`, with `ι(p)` the unit at `u p`.
pub(crate) fn projection_splitting(bc: &BaseChange) -> crate::Result<(InternalFunctor, LocalSplitting)> {
    let w = bc.projection();
    let (x, u) = (bc.base(), bc.along());
    let im = essential_image(&w);
    let table = u
        .dom()
        .elements()
        .map(|p| {
            let unit = x.e(u.at(p));
            let k = im.isos.table().iter().position(|&i| i == unit).expect("units are isomorphisms");
            im.apex.locate(p, k).expect("unit starts at u(p)")
        })
        .collect();
    let l = Arr::new(u.dom().clone(), im.apex.apex.clone(), table)?;
    let split = splitting_through(&w, u, &l)?;
    Ok((w, split))
}

pub(crate) fn same_cat(a: &Cat, b: &Cat) -> bool {
    std::sync::Arc::ptr_eq(a, b) || a == b
}

/// Folds sub-reports into one report named `law`.
pub(crate) fn merge(law: LawId, bound: usize, parts: Vec<VerificationReport>) -> VerificationReport {
    let mut check = Check::new(law.qualified(), bound);
    let mut reasons = Vec::new();
    for p in parts {
        if let Some(note) = &p.note {
            check.note(format!("{}: {note}", p.law));
        }
        match p.status {
            Status::Pass => (0..p.instances).for_each(|_| check.pass()),
            Status::Fail { failures, message, witness } => {
                let passed = p.instances.saturating_sub(failures);
                (0..passed).for_each(|_| check.pass());
                let v = crate::report::Violation { message: format!("{}: {message}", p.law), witness };
                (0..failures).for_each(|_| check.fail(v.clone()));
            }
            Status::Skipped { reason } => reasons.push(format!("{}: {reason}", p.law)),
        }
    }
    if !reasons.is_empty() {
        check.skip(reasons.join("; "));
    }
    check.finish()
}

/// Runs one law; the report is named `suite/law`.
pub fn run_law(law: LawId, ctx: &Context<'_>) -> VerificationReport {
    use LawId::*;
    let mut report = match law {
        Pentagon => bicategory::pentagon(ctx),
        UnitStrictness => bicategory::unit_strictness(ctx),
        AssociatorNaturality => bicategory::associator_naturality(ctx),
        Interchange => bicategory::interchange(ctx),
        VerticalAssociativity => bicategory::vertical_associativity(ctx),
        EquivalencesAreWeak => fractions::equivalences_are_weak(ctx),
        CompositionClosed => fractions::composition_closed(ctx),
        IsoClosed => fractions::iso_closed(ctx),
        SquareFilling => fractions::square_filling(ctx),
        TwoCellLifting => fractions::two_cell_lifting(ctx),
        EssentiallySurjective => localisation::essentially_surjective(ctx),
        Factorisation => localisation::factorisation(ctx),
        LocallyFullyFaithful => localisation::locally_fully_faithful(ctx),
        ConstructionValidity => lemmas::construction_validity(ctx),
        BaseChangeCoherence => lemmas::base_change_coherence(ctx),
        DescentOracle => lemmas::descent_oracle(ctx),
        BungePareAgreement => lemmas::bunge_pare_agreement(ctx),
        Pseudoinverse => lemmas::pseudoinverses(ctx),
        FullyFaithfulIsoClosed => lemmas::fully_faithful_iso_closed(ctx),
        RepresentablyFullyFaithful => lemmas::representably_fully_faithful(ctx),
        StrictPullbackOfBaseChange => lemmas::strict_pullback_of_base_change(ctx),
        FunctorImagesCompose => lemmas::functor_images_compose(ctx),
        AnafunctorRecognition => lemmas::anafunctor_recognition(ctx),
        CrossedModules => lemmas::crossed_modules(ctx),
        PretopologyAxioms => sites::pretopology_axioms(ctx),
        Saturation => sites::saturation(ctx),
        Subcanonicity => sites::subcanonicity(ctx),
        SubcanonicalUpCofinal => sites::subcanonical_up_cofinal(ctx),
        CofinalEquivalence => sites::cofinal_equivalence(ctx),
        Wisc => sites::wisc(ctx),
        Extensivity => appendix::extensivity(ctx),
        CoproductAxioms => appendix::coproduct_axioms(ctx),
        SubcanonicityTransfer => appendix::subcanonicity_transfer(ctx),
        UniversalEpisAgree => appendix::universal_epis_agree(ctx),
    };
    report.law = law.qualified();
    report
}

/// One suite run under at most one fault.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRun {
    pub suite: Suite,
    pub fault: Option<FaultClass>,
    pub reports: Vec<VerificationReport>,
}

impl SuiteRun {
    pub fn failures(&self) -> usize {
        self.reports.iter().filter(|r| r.failed()).count()
    }
}

/// Everything a `laws` invocation produced, in suite then law order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawsReport {
    pub seed: u64,
    pub bounds: Bounds,
    pub runs: Vec<SuiteRun>,
}

impl LawsReport {
    pub fn passed(&self) -> bool {
        self.runs.iter().all(|r| r.failures() == 0)
    }

    pub fn reports(&self) -> impl Iterator<Item = &VerificationReport> {
        self.runs.iter().flat_map(|r| r.reports.iter())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "seed {} bounds objects<={} arrows<={} random={}\n",
            self.seed, self.bounds.max_objects, self.bounds.max_arrows, self.bounds.random_categories
        );
        for run in &self.runs {
            match run.fault {
                Some(f) => out.push_str(&format!("# suite {} (fault injected: {f})\n", run.suite)),
                None => out.push_str(&format!("# suite {}\n", run.suite)),
            }
            for r in &run.reports {
                out.push_str(&r.to_string());
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }
}

pub fn run_suite(suite: Suite, corpus: &Corpus, fault: Option<FaultClass>) -> SuiteRun {
    let ctx = Context::new(corpus, fault);
    SuiteRun { suite, fault, reports: suite.laws().map(|l| run_law(l, &ctx)).collect() }
}

/// Runs `suites` on the corpus for `seed`; with `fault_inject`, each suite
/// is run once per fault class belonging to it instead.
pub fn run_laws(suites: &[Suite], seed: u64, bounds: Bounds, fault_inject: bool) -> LawsReport {
    let corpus = corpus_generate(seed, bounds);
    let mut runs = Vec::new();
    for &s in suites {
        if fault_inject {
            runs.extend(s.faults().map(|f| run_suite(s, &corpus, Some(f))));
        } else {
            runs.push(run_suite(s, &corpus, None));
        }
    }
    LawsReport { seed, bounds, runs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_consistent() {
        let mut names: Vec<String> = LawId::ALL.iter().map(|l| l.qualified()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), LawId::ALL.len());
        for s in Suite::ALL {
            assert!(s.laws().count() > 0, "{s}");
            assert!(s.faults().count() > 0, "{s}");
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        for l in LawId::ALL {
            assert_eq!(l.qualified().parse::<LawId>().unwrap(), l);
        }
    }
}
