//! Times every law on one corpus; `--fault-inject` runs each suite under its
//! own faults instead.

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inject = args.iter().any(|a| a == "--fault-inject");
    let seed = args.iter().find_map(|s| s.parse().ok()).unwrap_or(1);
    let corpus = anacat::laws::corpus_generate(seed, anacat::laws::Bounds::default());
    if inject {
        for suite in anacat::laws::Suite::ALL {
            for fault in suite.faults() {
                let t = std::time::Instant::now();
                let run = anacat::laws::run_suite(suite, &corpus, Some(fault));
                println!("{:>8.2?} {suite} under {fault}: {} failing laws", t.elapsed(), run.failures());
                for r in run.reports.iter().filter(|r| r.failed()) {
                    println!("           {}", r.law);
                }
            }
        }
        return;
    }
    let ctx = anacat::laws::Context::new(&corpus, None);
    for law in anacat::laws::LawId::ALL {
        let t = std::time::Instant::now();
        let r = anacat::laws::run_law(law, &ctx);
        println!("{:>8.2?} {r}", t.elapsed());
    }
}
