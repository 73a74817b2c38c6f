use std::path::Path;
use std::process::{Command, Output};

use absaf::absaf::write_ballots_json;
use absaf::af::write_apx;
use absaf::fixtures;
use serde_json::Value;

fn absaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_absaf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn canada(dir: &Path) -> (String, String) {
    let af = dir.join("canada.apx");
    let ballots = dir.join("canada.txt");
    std::fs::write(&af, fixtures::CANADA_APX).unwrap();
    std::fs::write(&ballots, fixtures::CANADA_BALLOTS).unwrap();
    (af.display().to_string(), ballots.display().to_string())
}

fn saved(dir: &Path, name: &str, e: &absaf::Absaf) -> (String, String) {
    let af = dir.join(format!("{name}.apx"));
    let ballots = dir.join(format!("{name}.json"));
    std::fs::write(&af, write_apx(e.af())).unwrap();
    std::fs::write(&ballots, write_ballots_json(e.af(), e.ballots())).unwrap();
    (af.display().to_string(), ballots.display().to_string())
}

#[test]
fn lists_preferred_extensions() {
    let dir = tempfile::tempdir().unwrap();
    let (af, _) = canada(dir.path());
    let text = stdout(&absaf(&["prf", "--af", &af]));
    assert_eq!(text.lines().next(), Some("8 preferred extensions"));
    assert_eq!(text.lines().count(), 9);
    let v = json(&absaf(&["prf", "--af", &af, "--json"]));
    assert_eq!(v["count"], 8);
    let sets = v["extensions"].as_array().unwrap();
    assert!(sets.iter().all(|s| s.as_array().unwrap().iter().any(|a| a == "p1" || a == "f1")));
}

#[test]
fn selects_with_each_rule() {
    let dir = tempfile::tempdir().unwrap();
    let (af, ballots) = canada(dir.path());
    let base = ["select", "--af", &af, "--ballots", &ballots, "--k", "2", "--json"];
    let maxcov = json(&absaf(&[&base[..], &["--rule", "maxcov"]].concat()));
    assert_eq!(maxcov["objective_f64"], 159.0);
    assert_eq!(maxcov["outcome"].as_array().unwrap().len(), 2);
    assert_eq!(maxcov["scores"].as_array().unwrap().len(), 187);

    for rule in ["utilitarian", "egalitarian", "harmonic"] {
        let exact = json(&absaf(&[&base[..], &["--rule", rule]].concat()));
        let greedy = json(&absaf(&[&base[..], &["--rule", rule, "--strategy", "greedy"]].concat()));
        assert!(exact["objective_f64"].as_f64().unwrap() >= greedy["objective_f64"].as_f64().unwrap() - 1e-12);
    }

    let text = stdout(&absaf(&["select", "--af", &af, "--ballots", &ballots, "--k", "2", "--rule", "maxcov"]));
    assert!(text.starts_with("maxcov (exact, regular) k=2\n"));
    assert!(text.contains("objective: 159 (159.000000)"));
}

#[test]
fn represent_yes_and_no() {
    let dir = tempfile::tempdir().unwrap();
    let (af, ballots) = saved(dir.path(), "undef", &fixtures::undefended_absaf());
    let args = ["represent", "--af", &af, "--ballots", &ballots];
    assert_eq!(stdout(&absaf(&[&args[..], &["--k", "2"]].concat())).trim(), "NO");
    let v = json(&absaf(&[&args[..], &["--k", "2", "--mode", "core", "--json"]].concat()));
    assert_eq!(v["representable"], true);
    let core = stdout(&absaf(&[&args[..], &["--mode", "core"]].concat()));
    assert!(core.starts_with("YES\n"));
}

#[test]
fn audits_jr() {
    let dir = tempfile::tempdir().unwrap();
    let (af, ballots) = saved(dir.path(), "jr", &fixtures::jr_counterexample());
    let args = ["audit", "--af", &af, "--ballots", &ballots, "--k", "2", "--axiom", "jr"];
    let bad = stdout(&absaf(&[&args[..], &["--viewpoint", "a,b,c,e,f,g,h", "--viewpoint", "a,b,c,e,i,j,k"]].concat()));
    assert!(bad.starts_with("jr: violated\n"));
    assert!(bad.contains("voters: 1,2"));
    let good =
        json(&absaf(&[&args[..], &["--viewpoint", "a,b,c,d", "--viewpoint", "a,b,c,e,f,g,h", "--json"]].concat()));
    assert_eq!(good["holds"], true);
    let sjr = json(&absaf(&[
        "audit",
        "--af",
        &af,
        "--ballots",
        &ballots,
        "--k",
        "2",
        "--axiom",
        "sjr",
        "--viewpoint",
        "a,b,c,d",
        "--json",
    ]));
    assert_eq!(sjr["axiom"], "sjr");
}

#[test]
fn generates_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gen");
    let out_s = out.display().to_string();
    let args =
        ["gen", "--n-args", "14", "--seed", "5", "--truths", "2", "--per-truth", "6", "--phi", "0", "--out", &out_s];
    stdout(&absaf(&args));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(out.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["truth_of_voter"].as_array().unwrap().len(), 12);
    let first = std::fs::read(out.join("ballots.json")).unwrap();

    let af = out.join("af.apx").display().to_string();
    let ballots = out.join("ballots.json").display().to_string();
    let v = json(&absaf(&["represent", "--af", &af, "--ballots", &ballots, "--k", "2", "--json"]));
    assert_eq!(v["representable"], true);

    stdout(&absaf(&args));
    assert_eq!(std::fs::read(out.join("ballots.json")).unwrap(), first);
}

#[test]
fn runs_small_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let text = stdout(&absaf(&[
        "exp",
        "metrics",
        "--set",
        "name=tiny",
        "--set",
        "afs=2",
        "--set",
        "phi=0.5",
        "--set",
        "k=1..2",
        "--out",
        &out,
    ]));
    assert_eq!(text.lines().count(), 3);
    let csv = std::fs::read_to_string(dir.path().join("tiny.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some(absaf::experiments::CSV_VERSION_LINE));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (af, ballots) = canada(dir.path());
    let missing = absaf(&["prf", "--af", "/nonexistent.apx"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));
    let capped = absaf(&[
        "select",
        "--af",
        &af,
        "--ballots",
        &ballots,
        "--k",
        "4",
        "--rule",
        "utilitarian",
        "--max-combinations",
        "10",
    ]);
    assert_eq!(capped.status.code(), Some(3));
    let bad_k = absaf(&["select", "--af", &af, "--ballots", &ballots, "--k", "0", "--rule", "utilitarian"]);
    assert_eq!(bad_k.status.code(), Some(2));
}
