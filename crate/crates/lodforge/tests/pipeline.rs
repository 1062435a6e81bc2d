mod common;

use std::collections::BTreeSet;
use std::fs;

use common::{digests, fixture, lodforge, s};

fn run_ok(args: &[&str]) {
    let run = lodforge(args);
    assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
}

#[test]
fn bundle_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("bundle");
    run_ok(&["pipeline", "--config", s(&fixture("nbs100.toml")), "--out", s(&out)]);
    let names: BTreeSet<String> = digests(&out).into_keys().collect();
    let want: BTreeSet<String> = ["dump.ttl", "dump.nt", "dump.rdf", "void.ttl", "quality.json", "quality.txt", "transform.json"]
        .map(String::from)
        .into();
    assert_eq!(names, want);
    let void = fs::read_to_string(out.join("void.ttl")).unwrap();
    assert!(void.contains("void:dataDump"));
    assert!(void.contains("void:triples"));
}

#[test]
fn stages_compose_to_the_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = fixture("mia.toml");
    let whole = tmp.path().join("whole");
    run_ok(&["pipeline", "--config", s(&cfg), "--out", s(&whole)]);

    let work = tmp.path().join("work");
    let mapped = work.join("mapped.ttl");
    let enriched = work.join("enriched/graph.ttl");
    let quality = work.join("enriched/quality.json");
    let split = tmp.path().join("split");
    run_ok(&["transform", "--config", s(&cfg), "--out", s(&mapped)]);
    run_ok(&["enrich", "--config", s(&cfg), "--input", s(&mapped), "--out", s(&enriched)]);
    run_ok(&["audit", "--config", s(&cfg), "--input", s(&enriched), "--out", s(&quality)]);
    let transform = work.join("transform.json");
    run_ok(&["publish", "--config", s(&cfg), "--input", s(&enriched), "--input", s(&transform), "--out", s(&split)]);

    assert_eq!(digests(&whole), digests(&split));
}

#[test]
fn publish_without_quality_report_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let dump = tmp.path().join("graph.ttl");
    run_ok(&["transform", "--config", s(&fixture("mia.toml")), "--out", s(&dump)]);
    let out = tmp.path().join("bundle");
    let run = lodforge(&["publish", "--config", s(&fixture("mia.toml")), "--input", s(&dump), "--out", s(&out)]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("quality"), "{}", run.stderr);
    assert!(!out.exists());
}

#[test]
fn refuses_foreign_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("bundle");
    fs::create_dir(&out).unwrap();
    fs::write(out.join("notes.txt"), "keep me").unwrap();
    let run = lodforge(&["pipeline", "--config", s(&fixture("mia.toml")), "--out", s(&out)]);
    assert_eq!(run.code, 1);
    assert_eq!(fs::read_to_string(out.join("notes.txt")).unwrap(), "keep me");
}

#[test]
fn rerun_replaces_previous_bundle() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("bundle");
    run_ok(&["pipeline", "--config", s(&fixture("mia.toml")), "--out", s(&out)]);
    let first = digests(&out);
    run_ok(&["pipeline", "--config", s(&fixture("mia.toml")), "--out", s(&out)]);
    assert_eq!(first, digests(&out));
    let leftovers: Vec<_> = fs::read_dir(tmp.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 1, "staging directories left behind: {leftovers:?}");
}
