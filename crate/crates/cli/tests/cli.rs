use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn anacat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anacat"))
        .args(args)
        .env_remove("ANACAT_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn codisc_fixture_loads_with_nine_arrows() {
    let o = anacat(&["validate", &fixture("codisc3.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("groupoid codisc3: 3 objects, 9 arrows"), "{}", stdout(&o));
}

#[test]
fn crossed_module_fixture_validates() {
    let o = anacat(&["validate", &fixture("xmod.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("crossed module mod2"));
}

#[test]
fn undeclared_object_is_reported_by_name() {
    let file = scratch(
        "dangling.json",
        r#"{"objects": {"a": {"size": 2}}, "maps": {"f": {"dom": "a", "cod": "ghost", "table": [0, 0]}}}"#,
    );
    let o = anacat(&["validate", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("undeclared object `ghost`"), "{}", stderr(&o));
    assert!(stderr(&o).contains("maps.f"), "{}", stderr(&o));
}

#[test]
fn syntax_errors_carry_a_location() {
    let file = scratch("broken.json", "{\n  \"objects\": {\"a\": {\"size\": }}\n}");
    let o = anacat(&["validate", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.json:2:"), "{}", stderr(&o));
}

#[test]
fn missing_composable_pair_fails_validation() {
    let file = scratch(
        "incomplete.json",
        r#"{"objects": {"one": {"size": 1}},
            "categories": {"c": {"obj": "one", "arr": "one", "s": [0], "t": [0], "e": [0], "m": {"pairs": []}}}}"#,
    );
    let o = anacat(&["validate", &file]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("composable pair (0, 0) is not listed"), "{}", stdout(&o));
}

#[test]
fn broken_crossed_module_fails_validation() {
    // t must be a homomorphism
    let file = scratch("badxmod.json", r#"{"ambient": "fingrp", "crossed_modules": {"x": {"g": "Z2", "h": "Z2", "t": [1, 0]}}}"#);
    let o = anacat(&["validate", &file]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn point_into_codiscrete_pair_is_a_weak_equivalence() {
    let o = anacat(&["is-weq", &fixture("j.json"), "--pretopology", "surj"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("true\n"));
    assert!(out.contains("cover: [0,1]"), "{out}");
    assert!(out.contains("iota: [0,1]"), "{out}");
}

#[test]
fn is_ff_names_the_functor() {
    let o = anacat(&["is-ff", &format!("{}#bang", fixture("ana.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");
    let o = anacat(&["is-ff", &fixture("ana.json")]);
    assert_eq!(o.status.code(), Some(2), "ambiguous reference");
}

#[test]
fn non_full_functor_is_rejected_with_witness() {
    // the discrete pair inside the codiscrete one: faithful, not full
    let file = scratch(
        "notfull.json",
        r#"{"objects": {"two": {"size": 2}, "four": {"size": 4}},
            "categories": {
              "disc2": {"obj": "two", "arr": "two", "s": [0, 1], "t": [0, 1], "e": [0, 1], "m": {"pairs": [[0, 0, 0], [1, 1, 1]]}},
              "codisc2": {"obj": "two", "arr": "four", "s": [0, 0, 1, 1], "t": [0, 1, 0, 1], "e": [0, 3],
                          "m": {"pairs": [[0,0,0],[2,1,0],[1,0,1],[3,1,1],[0,2,2],[2,3,2],[1,2,3],[3,3,3]]}}},
            "functors": {"i": {"dom": "disc2", "cod": "codisc2", "f0": [0, 1], "f1": [0, 3]}}}"#,
    );
    let o = anacat(&["is-ff", &file]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("false\n"));
    let o = anacat(&["is-weq", &file, "--pretopology", "surj"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pseudoinverse_validates() {
    let o = anacat(&["pseudoinverse", &fixture("j.json"), "--pretopology", "surj"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("failures: {}"));
}

#[test]
fn compose_ana_mirrors_the_library() {
    let f = format!("{}#p0", fixture("ana.json"));
    let g = format!("{}#spread", fixture("ana.json"));
    let o = anacat(&["compose-ana", &f, &g]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("cover: [0]"));
    // composing the wrong way round has no shared middle category
    let o = anacat(&["compose-ana", &g, &g]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vcomp_composes_and_rejects_mismatched_middles() {
    let a = format!("{}#there", fixture("ana.json"));
    let b = format!("{}#back", fixture("ana.json"));
    let o = anacat(&["vcomp", &a, &b]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "component: [[0,0,0]]\n");
    let o = anacat(&["vcomp", &a, &a]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_pretopology_and_suite_are_usage_errors() {
    assert_eq!(anacat(&["is-weq", &fixture("j.json"), "--pretopology", "nope"]).status.code(), Some(2));
    assert_eq!(anacat(&["laws", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(anacat(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn custom_pretopology_from_a_file() {
    let covers = scratch(
        "covers.json",
        r#"{"objects": {"two": {"size": 2}}, "covers": [{"dom": "two", "cod": "two", "table": [0, 1]}]}"#,
    );
    let o = anacat(&["is-weq", &fixture("j.json"), "--pretopology", &format!("custom:{covers}")]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn fractions_suite_passes_on_seed_one() {
    let o = anacat(&["laws", "--suite", "fractions", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn fault_injection_reports_failures() {
    let o = anacat(&["laws", "--suite", "bicategory", "--fault-inject"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fault injected: associator"));
}

#[test]
fn bound_defaults_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_anacat"))
        .args(["laws", "--suite", "localisation"])
        .env("ANACAT_BOUND", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("seed 1 bounds objects<=0 "), "{}", stdout(&o));
}

#[test]
fn structured_reports_round_trip_and_are_stable() {
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("lemmas.json").display().to_string();
    let first = anacat(&["laws", "--suite", "lemmas", "--format", "structured", "--out", &out]);
    assert_eq!(first.status.code(), Some(0));
    let second = anacat(&["laws", "--suite", "lemmas", "--format", "structured"]);
    assert_eq!(first.stdout, second.stdout);
    let rendered = anacat(&["report", &out, "--format", "structured"]);
    assert_eq!(rendered.stdout, first.stdout);
    let text = anacat(&["report", &out, "--format", "text"]);
    assert!(stdout(&text).contains("PASS lemmas/descent-oracle"));
}
