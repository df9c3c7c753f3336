use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/v1").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finshape")).args(args).output().unwrap()
}

fn run_with(args: &[&str], files: &[&str]) -> Output {
    let mut all: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    all.extend(files.iter().map(|f| fixture(f).to_string_lossy().into_owned()));
    let refs: Vec<&str> = all.iter().map(String::as_str).collect();
    run(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn info_on_the_circle() {
    let o = run_with(&["info", "--format", "json"], &["circle_topology.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["components"], 1);
    assert_eq!(v["core"], 4);
    assert_eq!(v["opens"], 7);
    assert_eq!(v["beat_points"].as_array().unwrap().len(), 0);
    let table = stdout(&run_with(&["info"], &["circle_topology.json"]));
    assert!(table.contains("(Z; Z)"), "{table}");
}

#[test]
fn info_on_contractible_spaces() {
    let v = json(&run_with(&["info", "--format", "json"], &["singleton.json"]));
    assert_eq!(v["core"], 1);
    assert_eq!(v["homology"]["dims"].as_array().unwrap().len(), 1);
    let v = json(&run_with(&["info", "--format", "json"], &["chain.json"]));
    assert_eq!(v["contractible"], true);
}

#[test]
fn worked_examples_pass_and_repeat() {
    let first = run(&["paper-examples"]);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert_eq!(stdout(&first).matches("PASS").count(), 4);
    let second = run(&["paper-examples"]);
    assert_eq!(first.stdout, second.stdout);
    let on_disk = run(&["paper-examples", "--fixtures", fixture("").to_str().unwrap()]);
    assert_eq!(first.stdout, on_disk.stdout);
}

#[test]
fn corrupted_fixture_names_the_failing_scenario() {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    // An extra member changes the projection out of the basis.
    let cover =
        r#"{ "space": "circle_topology.json", "members": [["a", "b"], ["a", "b", "c"], ["a", "b", "d"], ["a"]] }"#;
    std::fs::write(dir.path().join("circle_cover.json"), cover).unwrap();
    let o = run(&["paper-examples", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let failing: Vec<&str> = out.lines().filter(|l| l.contains("FAIL")).collect();
    assert_eq!(failing.len(), 1, "{out}");
    assert!(failing[0].starts_with("basis-versus-cover"), "{out}");
}

#[test]
fn missing_fixture_fails_its_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["paper-examples", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).matches("FAIL").count(), 4);
}

#[test]
fn closure_has_no_projection_onto_the_pair() {
    let o = run_with(&["check", "leq-c"], &["wedge_closure.json", "wedge_pair.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("None"));
    let o = run_with(&["check", "refines"], &["wedge_closure.json", "wedge_pair.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run_with(&["check", "basis-like"], &["wedge_pair.json"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run_with(&["check", "basis-like"], &["wedge_closure.json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn leq_c_reports_the_projection() {
    let o = run_with(&["check", "leq-c", "--format", "json"], &["circle_cover.json", "circle_cover.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["projection"].as_array().unwrap().len(), 3);
}

#[test]
fn system_checks_on_the_circle() {
    let o = run_with(&["check", "rudimentary"], &["circle_hasse.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run_with(&["check", "coherence", "--parallel", "--format", "json"], &["circle_hasse.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["index_size"], 34);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn sw_compare_verdicts() {
    let o = run_with(&["check", "sw-compare"], &["circle_hasse.json", "circle_topology.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Equivalent"));
    let o = run_with(&["check", "sw-compare", "--format", "json"], &["chain.json", "circle_hasse.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["verdict"], "distinct");
}

#[test]
fn hasse_export() {
    let dot = stdout(&run_with(&["export", "hasse"], &["circle_hasse.json"]));
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 4);
    let dot = stdout(&run_with(&["export", "hasse"], &["antichain.json"]));
    assert_eq!(dot.matches("->").count(), 0);
}

#[test]
fn nerve_export_matches_intersections() {
    let v = json(&run_with(&["export", "nerve"], &["circle_cover.json"]));
    let members: Vec<BTreeSet<char>> = ["ab", "abc", "abd"].iter().map(|m| m.chars().collect()).collect();
    let vertices: Vec<String> =
        v["vertices"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
    let member_of = |label: &str| -> BTreeSet<char> { label.chars().filter(|c| c.is_ascii_lowercase()).collect() };
    let mut expected = BTreeSet::new();
    for mask in 1u32..8 {
        let chosen: Vec<&BTreeSet<char>> = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| &members[i]).collect();
        let meet = chosen.iter().skip(1).fold(chosen[0].clone(), |acc, m| acc.intersection(m).cloned().collect());
        if !meet.is_empty() {
            let mut face: Vec<BTreeSet<char>> = chosen.into_iter().cloned().collect();
            face.sort();
            expected.insert(face);
        }
    }
    let maximal: Vec<Vec<BTreeSet<char>>> = expected
        .iter()
        .filter(|f| !expected.iter().any(|g| g.len() > f.len() && f.iter().all(|m| g.contains(m))))
        .cloned()
        .collect();
    let mut facets: Vec<Vec<BTreeSet<char>>> = v["facets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| {
            let mut face: Vec<BTreeSet<char>> =
                f.as_array().unwrap().iter().map(|l| member_of(l.as_str().unwrap())).collect();
            face.sort();
            face
        })
        .collect();
    facets.sort();
    assert_eq!(facets, maximal);
    assert_eq!(vertices.len(), 3);
}

#[test]
fn order_complex_and_homology_exports() {
    let v = json(&run_with(&["export", "order-complex"], &["circle_hasse.json"]));
    assert_eq!(v["facets"].as_array().unwrap().len(), 4);
    let v = json(&run_with(&["export", "homology"], &["circle_hasse.json"]));
    assert_eq!(v["dims"][1]["betti"], 1);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let o = run_with(&["export", "homology", "-o", out.to_str().unwrap()], &["circle_hasse.json"]);
    assert_eq!(o.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["info", "no-such-file.json"]).status.code(), Some(2));
    assert_eq!(run_with(&["info", "--format", "dot"], &["circle_hasse.json"]).status.code(), Some(2));
    assert_eq!(run_with(&["info", "--guard-faces", "5"], &["circle_hasse.json"]).status.code(), Some(3));
    assert_eq!(run_with(&["info", "--guard-faces", "0"], &["circle_hasse.json"]).status.code(), Some(2));
    let o = run_with(&["check", "refines"], &["circle_cover.json", "wedge_pair.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_is_seeded() {
    let a = run(&["sweep", "--seed", "11", "--count", "8", "--format", "json"]);
    let b = run(&["sweep", "--seed", "11", "--count", "8", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 11);
    let c = run(&["sweep", "--count", "2", "--format", "json"]);
    assert!(json(&c)["seed"].is_u64());
}
