use std::path::Path;

use proptest::prelude::*;
use serde_json::{json, Value};

use conjseries::cli::{run_with, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, EXIT_USAGE};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Stub {
    Pass,
    Fail,
    Inconclusive,
}

fn stub_entry(i: usize, kind: Stub) -> Value {
    let geometric = json!({"start_index": 0, "ratio_base": {"value": "2", "mode": "inverse_power"}});
    let (payload, rhs) = match kind {
        Stub::Pass => (geometric, "2"),
        Stub::Fail => (geometric, "3"),
        // sum 1/k^2 converges too slowly for the ratio envelope
        Stub::Inconclusive => (json!({"start_index": 1, "rational_prefactor": {"num": ["1"], "den": ["0", "0", "1"]}}), "pi^2/6"),
    };
    json!({
        "id": format!("S{i}"),
        "kind": "series",
        "status": "conjecture",
        "source": "stub",
        "payload": payload,
        "rhs": rhs,
    })
}

fn write_catalog(dir: &Path, stubs: &[Stub]) -> std::path::PathBuf {
    let entries: Vec<Value> = stubs.iter().enumerate().map(|(i, s)| stub_entry(i, *s)).collect();
    let path = dir.join("catalog.json");
    std::fs::write(&path, serde_json::to_string(&json!({"version": 1, "entries": entries})).unwrap()).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(std::iter::once("conjseries").chain(args.iter().copied()), &mut out, &mut err, None);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn each_stub_has_its_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cat = write_catalog(dir.path(), &[Stub::Pass, Stub::Fail, Stub::Inconclusive]);
    let cat = cat.to_str().unwrap();
    for (id, code) in [("S0", EXIT_PASS), ("S1", EXIT_FAIL), ("S2", EXIT_INCONCLUSIVE)] {
        let (got, out, _) = run(&["--catalog", cat, "verify", id, "--digits", "15", "--max-terms", "4000"]);
        assert_eq!(got, code, "{id}: {out}");
    }
}

#[test]
fn json_report_lists_every_entry() {
    let dir = tempfile::tempdir().unwrap();
    let cat = write_catalog(dir.path(), &[Stub::Pass, Stub::Fail]);
    let (code, out, _) = run(&["--catalog", cat.to_str().unwrap(), "--format", "json", "verify", "--all", "--digits", "15"]);
    assert_eq!(code, EXIT_FAIL);
    let v: Value = serde_json::from_str(&out).unwrap();
    let s = v.to_string();
    assert!(s.contains("\"S0\"") && s.contains("\"S1\""), "{s}");
}

#[test]
fn malformed_catalog_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"version": 1, "entries": [{"id": "A", "kind": "series"}]}"#).unwrap();
    let (code, _, err) = run(&["--catalog", path.to_str().unwrap(), "list"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("/entries/0"), "{err}");
}

#[test]
fn unknown_id_is_a_usage_error() {
    assert_eq!(run(&["verify", "NOPE"]).0, EXIT_USAGE);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exit_code_follows_worst_verdict(stubs in prop::collection::vec(
        prop_oneof![Just(Stub::Pass), Just(Stub::Fail), Just(Stub::Inconclusive)], 1..5)) {
        let dir = tempfile::tempdir().unwrap();
        let cat = write_catalog(dir.path(), &stubs);
        let (code, out, _) = run(&["--catalog", cat.to_str().unwrap(), "verify", "--all", "--digits", "15", "--max-terms", "4000"]);
        let want = if stubs.contains(&Stub::Fail) {
            EXIT_FAIL
        } else if stubs.contains(&Stub::Inconclusive) {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_PASS
        };
        prop_assert_eq!(code, want, "{}", out);
    }
}
