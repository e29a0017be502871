//! `anacat`: load instance files, run constructions and law suites.
//!
//! Exit status: 0 when everything checked passes, 1 when a failure witness
//! was printed, 2 for usage, parse and reference errors.

mod instance;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anacat::ambient::Ambient;
use anacat::ana::{compose_ana, pseudoinverse, vcomp, AnaTransformation, Anafunctor};
use anacat::instances::xmod_to_groupoid;
use anacat::internal::{classify, ff_failure, InternalFunctor, Verdict};
use anacat::laws::corpus::ambient_of;
use anacat::laws::{run_laws, Bounds, LawsReport, Suite};
use anacat::sites::Pretopology;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use instance::{Instance, LoadError};

#[derive(Parser)]
#[command(name = "anacat", version, about = "Internal categories, anafunctors and localisation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load an instance file and validate every declaration in it.
    Validate { file: PathBuf },
    /// Decide whether a functor is fully faithful.
    IsFf {
        /// `FILE` or `FILE#NAME`.
        functor: String,
    },
    /// Decide whether a functor is a J-equivalence and print its splitting.
    IsWeq {
        functor: String,
        /// `triv`, `surj`, `split`, `all`, `epi-grp`, `coprod-of:<family>` or
        /// `custom:<file>`.
        #[arg(long)]
        pretopology: String,
    },
    /// Compose anafunctors: `G` after `F`.
    ComposeAna {
        #[arg(value_name = "F")]
        first: String,
        #[arg(value_name = "G")]
        second: String,
    },
    /// Vertically compose transformations: `b` after `a`.
    Vcomp { a: String, b: String },
    /// Build the pseudoinverse anafunctor of a J-equivalence.
    Pseudoinverse {
        functor: String,
        #[arg(long)]
        pretopology: String,
    },
    /// Run law suites on a generated corpus.
    Laws {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Object bound for the random part of the corpus.
        #[arg(long, env = "ANACAT_BOUND", default_value_t = Bounds::default().max_objects)]
        bound: usize,
        /// Run each suite under its own deliberately broken constructions.
        #[arg(long)]
        fault_inject: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the structured report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a structured report written by `laws`.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// Why a command could not run at all.
#[derive(Debug, thiserror::Error)]
enum UsageError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{0}")]
    Usage(String),
}

fn usage(message: impl Into<String>) -> UsageError {
    UsageError::Usage(message.into())
}

type Outcome = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file),
        Command::IsFf { functor } => {
            let f = pick(&functor, |i| &i.functors, "functor")?;
            match ff_failure(&f) {
                None => println!("true"),
                Some(v) => {
                    println!("false");
                    println!("{}", pretty(&json!({"message": v.message, "witness": v.witness})));
                }
            }
            Ok(ff_failure(&f).is_none())
        }
        Command::IsWeq { functor, pretopology } => {
            let f = pick(&functor, |i| &i.functors, "functor")?;
            let j = resolve_pretopology(&pretopology, &ambient_of(f.cod()))?;
            match classify(&f, &j) {
                Verdict::Equivalence { witness } => {
                    println!("true");
                    println!(
                        "{}",
                        pretty(&json!({
                            "cover": witness.cover.table(),
                            "section": functor_tables(&witness.section),
                            "iota": witness.iota.component().table(),
                        }))
                    );
                    Ok(true)
                }
                Verdict::NotFullyFaithful { witness } => {
                    println!("false");
                    println!("{}", pretty(&json!({"not_fully_faithful": witness.message, "witness": witness.witness})));
                    Ok(false)
                }
                Verdict::NotLocallySplitWithinBound { bound, covers_tried } => {
                    println!("false");
                    println!("{}", pretty(&json!({"no_local_splitting": {"bound": bound, "covers_tried": covers_tried}})));
                    Ok(false)
                }
            }
        }
        Command::ComposeAna { first, second } => {
            let f = pick(&first, |i| &i.anafunctors, "anafunctor")?;
            let g = pick(&second, |i| &i.anafunctors, "anafunctor")?;
            if f.tgt() != g.src() {
                return Err(usage("the target of F is not the source of G"));
            }
            let c = compose_ana(&f, &g).map_err(|e| usage(e.to_string()))?;
            println!("{}", pretty(&anafunctor_tables(&c)));
            Ok(true)
        }
        Command::Vcomp { a, b } => {
            let a = pick(&a, |i| &i.ana_transformations, "ana-transformation")?;
            let b = pick(&b, |i| &i.ana_transformations, "ana-transformation")?;
            if a.tgt() != b.src() {
                return Err(usage("the target of a is not the source of b"));
            }
            match vcomp(&a, &b) {
                Ok(c) => {
                    println!("{}", pretty(&transformation_tables(&c)));
                    Ok(true)
                }
                Err(e) => {
                    println!("{}", pretty(&json!({"vcomp_failed": e.to_string()})));
                    Ok(false)
                }
            }
        }
        Command::Pseudoinverse { functor, pretopology } => {
            let w = pick(&functor, |i| &i.functors, "functor")?;
            let j = resolve_pretopology(&pretopology, &ambient_of(w.cod()))?;
            let p = match pseudoinverse(&w, &j) {
                Ok(p) => p,
                Err(e) => {
                    println!("{}", pretty(&json!({"not_a_j_equivalence": e.to_string()})));
                    return Ok(false);
                }
            };
            let checks = [
                ("inverse", p.inverse.validate(&j)),
                ("iota", p.iota.validate_iso()),
                ("epsilon", p.epsilon.validate_iso()),
            ];
            let failures: BTreeMap<&str, Value> = checks
                .iter()
                .filter_map(|(name, r)| r.as_ref().err().map(|v| (*name, json!({"message": v.message, "witness": v.witness}))))
                .collect();
            println!(
                "{}",
                pretty(&json!({
                    "inverse": anafunctor_tables(&p.inverse),
                    "iota": transformation_tables(&p.iota),
                    "epsilon": transformation_tables(&p.epsilon),
                    "failures": failures,
                }))
            );
            Ok(failures.is_empty())
        }
        Command::Laws { suite, seed, bound, fault_inject, format, out } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse().map_err(UsageError::Usage)?]
            };
            let report = run_laws(&suites, seed, Bounds::with_objects(bound), fault_inject);
            if let Some(path) = out {
                std::fs::write(&path, report.to_json() + "\n")
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            emit(&report, format);
            Ok(report.passed())
        }
        Command::Report { file, format } => {
            let text = std::fs::read_to_string(&file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let report: LawsReport =
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            emit(&report, format);
            Ok(report.passed())
        }
    }
}

fn emit(report: &LawsReport, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Structured => println!("{}", report.to_json()),
    }
}

/// One `key: value` line per field, nested objects indented, everything
/// else compact.
fn pretty(v: &Value) -> String {
    fn go(v: &Value, indent: usize, out: &mut Vec<String>) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, x) in map {
                    match x {
                        Value::Object(inner) if !inner.is_empty() => {
                            out.push(format!("{:indent$}{k}:", ""));
                            go(x, indent + 2, out);
                        }
                        _ => out.push(format!("{:indent$}{k}: {x}", "")),
                    }
                }
            }
            _ => out.push(format!("{:indent$}{v}", "")),
        }
    }
    let mut out = Vec::new();
    go(v, 0, &mut out);
    out.join("\n")
}

fn validate(file: &Path) -> Outcome {
    let inst = match Instance::load(file) {
        Ok(inst) => inst,
        Err(e) if e.is_validation() => {
            println!("invalid: {e}");
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    println!("ambient {}", inst.ambient.name());
    println!("{} objects, {} maps", inst.objects.len(), inst.maps.len());
    for (name, c) in &inst.categories {
        let kind = if c.is_groupoid() { "groupoid" } else { "category" };
        println!("{kind} {name}: {} objects, {} arrows", c.obj().size(), c.arr().size());
    }
    for name in inst.functors.keys() {
        println!("functor {name}: ok");
    }
    for name in inst.transformations.keys() {
        println!("transformation {name}: ok");
    }
    for (name, a) in &inst.anafunctors {
        println!("anafunctor {name}: cover of {} points", a.cover().dom().size());
    }
    for name in inst.ana_transformations.keys() {
        println!("ana-transformation {name}: ok");
    }
    let mut ok = true;
    for (name, xm) in &inst.crossed_modules {
        match xmod_to_groupoid(xm).map(|g| g.validate_groupoid().map(|_| g)) {
            Ok(Ok(g)) => println!(
                "crossed module {name}: t of order {} → {}, groupoid with {} objects and {} arrows",
                xm.g.order(),
                xm.h.order(),
                g.obj().size(),
                g.arr().size()
            ),
            Ok(Err(v)) => {
                ok = false;
                println!("invalid: crossed module {name}: {v}");
            }
            Err(e) => {
                ok = false;
                println!("invalid: crossed module {name}: {e}");
            }
        }
    }
    Ok(ok)
}

/// `FILE#NAME`, or `FILE` alone when it declares exactly one item of the
/// kind asked for.
fn pick<T: Clone>(
    reference: &str,
    kind: impl Fn(&Instance) -> &BTreeMap<String, T>,
    what: &str,
) -> Result<T, UsageError> {
    let (path, name) = match reference.rsplit_once('#') {
        Some((p, n)) => (p, Some(n)),
        None => (reference, None),
    };
    let inst = Instance::load(Path::new(path))?;
    let items = kind(&inst);
    match name {
        Some(n) => items.get(n).cloned().ok_or_else(|| usage(format!("{path} declares no {what} `{n}`"))),
        None if items.len() == 1 => Ok(items.values().next().expect("one item").clone()),
        None => Err(usage(format!("{path} declares {} {what}s; name one as {path}#NAME", items.len()))),
    }
}

fn resolve_pretopology(name: &str, ambient: &Ambient) -> Result<Arc<Pretopology>, UsageError> {
    if let Some(file) = name.strip_prefix("custom:") {
        let inst = Instance::load(Path::new(file))?;
        if &inst.ambient != ambient {
            return Err(usage(format!("{file} lives in {}, not {}", inst.ambient.name(), ambient.name())));
        }
        return Ok(Arc::new(Pretopology::listed(name, inst.ambient, inst.covers)));
    }
    Pretopology::named(name, ambient.clone()).map(Arc::new).map_err(|e| usage(e.to_string()))
}

fn functor_tables(f: &InternalFunctor) -> Value {
    json!({"f0": f.f0().table(), "f1": f.f1().table()})
}

fn anafunctor_tables(a: &Anafunctor) -> Value {
    let bc = a.base_change();
    let f1: Vec<[usize; 4]> = bc
        .cat()
        .arr()
        .elements()
        .map(|z| {
            let (p1, p2, x) = bc.components(z);
            [p1, p2, x, a.functor().f1().at(z)]
        })
        .collect();
    json!({"cover": a.cover().table(), "f0": a.functor().f0().table(), "f1": f1})
}

fn transformation_tables(t: &AnaTransformation) -> Value {
    let d = t.domain();
    let component: Vec<[usize; 3]> = (0..d.len())
        .map(|z| {
            let (p, q) = d.components(z);
            [p, q, t.component().at(z)]
        })
        .collect();
    json!({"component": component})
}
