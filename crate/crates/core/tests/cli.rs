use std::path::PathBuf;
use std::process::{Command, Output};

use khc_core::cli::VERDICT;
use khc_core::movie::{sliding_movie, Movie, Placement};

fn khc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khc"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("KHC_MAX_CROSSINGS")
        .output()
        .expect("khc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("khc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn counterexample_prints_verdict_and_is_deterministic() {
    let a = khc(&["--format", "text", "counterexample"]);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert!(text.lines().any(|l| l == VERDICT), "{text}");
    assert!(text.contains("id mod c: true\nid: false"));
    assert_eq!(khc(&["--format", "text", "counterexample"]).stdout, a.stdout);

    let j = khc(&["counterexample"]);
    assert_eq!(j.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["verdict"], VERDICT);
    assert_eq!(v["identity_mod_c"], true);
    assert_eq!(v["identity"], false);
    assert_eq!(khc(&["counterexample"]).stdout, j.stdout);
}

#[test]
fn homology_of_the_unknot() {
    let o = khc(&["homology", "fixtures/unknot.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["homology"]["(0,-1)"]["free"], 1);
    assert_eq!(v["homology"]["(0,1)"]["free"], 1);
    assert_eq!(v["homology"].as_object().unwrap().len(), 2);
    assert_eq!(v["euler_matches_bracket"], true);
}

#[test]
fn fixture_names_are_accepted() {
    let o = khc(&["--format", "text", "euler", "trefoil_right"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("match: true"));
}

#[test]
fn malformed_diagram_exits_2() {
    let p = scratch("bad.json", "{\"crossings\": [");
    assert_eq!(khc(&["homology", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(khc(&["homology", "no/such/file.json"]).status.code(), Some(2));
}

#[test]
fn size_guard_exits_3() {
    let o = khc(&["homology", "fixtures/torus_2_13.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("13 crossings"));
    let raised = Command::new(env!("CARGO_BIN_EXE_khc"))
        .args(["euler", "fixtures/torus_2_13.json"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env("KHC_MAX_CROSSINGS", "13")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0));
}

#[test]
fn empty_movie_is_identity() {
    let p = scratch("still.json", r#"{"initial": "unlink_2", "events": []}"#);
    let o = khc(&["--format", "text", "movie", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("id mod c: true\nid: true"));
}

#[test]
fn sliding_movie_file_is_not_identity() {
    let o = khc(&["--format", "text", "movie", "fixtures/sliding_movie.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("id mod c: true\nid: false"));
}

#[test]
fn sliding_movie_fixture_matches_the_builder() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/sliding_movie.json")).unwrap();
    assert_eq!(Movie::from_json(&text).unwrap(), sliding_movie(Placement::default()).unwrap());
}

#[test]
fn invalid_bigon_removal_exits_2() {
    let p = scratch("nobigon.json", r#"{"initial": "trefoil_right", "events": [{"type": "r2_down", "crossings": [0, 1]}]}"#);
    assert_eq!(khc(&["movie", p.to_str().unwrap()]).status.code(), Some(2));
    let p = scratch("typo.json", r#"{"initial": "unlink_2", "events": [{"type": "r3"}]}"#);
    assert_eq!(khc(&["movie", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn nonzero_differential_endpoints_exit_4() {
    let p = scratch("hopf.json", r#"{"initial": "hopf_positive", "events": []}"#);
    assert_eq!(khc(&["movie", p.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn fuzz_r2_reports_each_seed() {
    let o = khc(&["--format", "text", "fuzz-r2", "--seed", "3", "--steps", "2", "--trials", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.contains("id mod c: true")), "{text}");
}
