//! The ten acceptance criteria, run on corpus seed 1 with their time limits.
//! Runs without the test harness so the one PASS/FAIL line per criterion is
//! always printed; exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use anacat::ambient::Ambient;
use anacat::laws::corpus::ambient_of;
use anacat::laws::{corpus_generate, run_law, run_laws, run_suite, Bounds, Context, Corpus, LawId, Suite};
use anacat::report::VerificationReport;
use anacat::sites::{is_saturated, Pretopology};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn laws(ctx: &Context<'_>, ids: &[LawId]) -> Vec<VerificationReport> {
    ids.iter().map(|&l| run_law(l, ctx)).collect()
}

/// Every report passed, with at least `min` instances in total.
fn all_pass(reports: &[VerificationReport], min: usize) -> Outcome {
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.to_string()).collect();
    let instances: usize = reports.iter().map(|r| r.instances).sum();
    let ok = failed.is_empty() && instances >= min;
    let detail = if failed.is_empty() {
        format!("{instances} instances over {} laws (need {min})", reports.len())
    } else {
        failed.join("; ")
    };
    outcome(ok, detail)
}

fn construction_validity(corpus: &Corpus, ctx: &Context<'_>) -> Outcome {
    let ambients: Vec<Ambient> = corpus.categories.iter().map(|c| ambient_of(&c.item)).collect();
    let covered = [Ambient::FinSet, Ambient::FinGrp]
        .iter()
        .all(|a| ambients.contains(a))
        && ambients.iter().any(|a| matches!(a, Ambient::FinGSet(_)));
    let small = corpus.categories.iter().filter(|c| c.item.obj().size() <= 4 && c.item.arr().size() <= 10).count();
    let r = all_pass(&laws(ctx, &[LawId::ConstructionValidity]), 1);
    outcome(
        r.ok && covered && small >= 50,
        format!("{} categories ({small} within 4 objects / 10 arrows), all three ambients: {covered}; {}", corpus.categories.len(), r.detail),
    )
}

fn base_change_coherence(corpus: &Corpus, ctx: &Context<'_>) -> Outcome {
    // one identity check per category, the rest are (X, p, q) triples
    let r = laws(ctx, &[LawId::BaseChangeCoherence]);
    all_pass(&r, corpus.categories.len() + 100)
}

fn bicategory(corpus: &Corpus, ctx: &Context<'_>) -> Outcome {
    let clean = all_pass(&laws(ctx, &Suite::Bicategory.laws().collect::<Vec<_>>()), 1);
    let mut blind = Vec::new();
    for fault in Suite::Bicategory.faults() {
        if run_suite(Suite::Bicategory, corpus, Some(fault)).failures() == 0 {
            blind.push(fault.to_string());
        }
    }
    let detail = if blind.is_empty() {
        format!("{}; every fault class detected", clean.detail)
    } else {
        format!("{}; undetected faults: {}", clean.detail, blind.join(", "))
    };
    outcome(clean.ok && blind.is_empty(), detail)
}

fn bunge_pare(ctx: &Context<'_>) -> Outcome {
    let saturated = is_saturated(&Pretopology::surjections(Ambient::FinSet), 4);
    let r = all_pass(&laws(ctx, &[LawId::BungePareAgreement]), 1);
    outcome(r.ok && saturated, format!("surjections saturated at bound 4: {saturated}; {}", r.detail))
}

fn determinism() -> Outcome {
    let a = run_laws(&Suite::ALL, 1, Bounds::default(), false).to_json();
    let b = run_laws(&Suite::ALL, 1, Bounds::default(), false).to_json();
    outcome(a == b, format!("{} bytes per structured report", a.len()))
}

fn main() {
    let start = Instant::now();
    let corpus = corpus_generate(1, Bounds::default());
    let ctx = Context::new(&corpus, None);
    println!("corpus seed 1 generated in {:.2?}", start.elapsed());

    type Criterion<'a> = (&'a str, u64, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion<'_>> = vec![
        ("construction validity", 10, Box::new(|| construction_validity(&corpus, &ctx))),
        ("base-change coherence", 5, Box::new(|| base_change_coherence(&corpus, &ctx))),
        ("descent oracle", 30, Box::new(|| all_pass(&laws(&ctx, &[LawId::DescentOracle]), 50))),
        ("bicategory suite", 60, Box::new(|| bicategory(&corpus, &ctx))),
        ("fractions suite", 60, Box::new(|| all_pass(&laws(&ctx, &Suite::Fractions.laws().collect::<Vec<_>>()), 1))),
        ("localisation suite", 60, Box::new(|| all_pass(&laws(&ctx, &Suite::Localisation.laws().collect::<Vec<_>>()), 1))),
        ("Bunge-Pare agreement", 30, Box::new(|| bunge_pare(&ctx))),
        ("pseudoinverses", 30, Box::new(|| all_pass(&laws(&ctx, &[LawId::Pseudoinverse]), 1))),
        ("appendix suite", 30, Box::new(|| all_pass(&laws(&ctx, &Suite::Appendix.laws().collect::<Vec<_>>()), 1))),
        ("determinism", 600, Box::new(determinism)),
    ];

    let mut failures = Vec::new();
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let elapsed = t.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let ok = o.ok && in_time;
        println!(
            "{} [{}] {name}: {} ({:.2?}, limit {limit}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            elapsed
        );
        if !ok {
            failures.push(i + 1);
        }
    }
    if !failures.is_empty() {
        eprintln!("criteria failed: {failures:?}");
        std::process::exit(1);
    }
}
