mod common;

use std::fs;

use common::{fixture_dir, run};

#[test]
fn golden_outputs() {
    let failures: Vec<String> = common::check_goldens()
        .into_iter()
        .filter_map(|(name, r)| r.err().map(|e| format!("{name}: {e}")))
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn seeded_fixtures_validate() {
    let dir = fixture_dir();
    for f in common::FIXTURES {
        let r = run(&["validate".into(), dir.path().join(format!("{f}.cub"))]);
        assert_eq!((r.code, r.stdout.as_str()), (0, "valid\n"), "{f}");
    }
}

#[test]
fn malformed_input_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cub");
    fs::write(&bad, "cubes 1\npair 0.-1 0.+9 1 2 3\n").unwrap();
    let r = run(&["analyze".into(), bad.clone()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);

    fs::write(&bad, "cubes 1\npair 0.-1 0.+1 1 2 3\n").unwrap();
    let r = run(&["validate".into(), bad]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.lines().count(), 6, "six unmatched facets");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["analyze"]).code, 2);
    assert_eq!(run(&["search", "--n", "1", "--bogus"]).code, 2);
    assert_eq!(run(&["--format", "xml", "analyze", "x"]).code, 2);
}

#[test]
fn domain_errors_exit_1() {
    let dir = fixture_dir();
    let e1 = dir.path().join("example1.cub");
    let seed = dir.path().join("seed.cub");
    let r4 = dir.path().join("two_cusps_r4.cub");
    let s = |p: &std::path::Path| p.display().to_string();
    assert_eq!(run(&["fill", &s(&e1), "--slopes", "0,0,1"]).code, 1, "six cusps need six slopes");
    assert_eq!(run(&["fill", &s(&seed), "--slopes", "2,2,2"]).code, 1);
    assert_eq!(run(&["fill", &s(&r4), "--slopes", "0,0,1;0,0,1"]).code, 1);
    assert_eq!(run(&["flower", &s(&seed)]).code, 1);
    assert_eq!(run(&["split", &s(&e1), "--count", "1", "--edge", "9"]).code, 1);
    assert_eq!(run(&["--budget", "10", "canon", &s(&e1)]).code, 1);
    assert_eq!(run(&["analyze", "/nonexistent/file.cub"]).code, 1);
}

#[test]
fn canon_recognizes_relabeled_copies() {
    let dir = fixture_dir();
    let relabeled = dir.path().join("relabeled.cub");
    let c = cubekit::fixtures::example2().relabel(&cubekit::Relabeling {
        perm: vec![1, 0],
        frames: vec![
            cubekit::SignedPerm4::new([2, -1, 4, 3]).unwrap(),
            cubekit::SignedPerm4::new([-1, 3, 2, -4]).unwrap(),
        ],
    });
    fs::write(&relabeled, c.serialize()).unwrap();
    let r = run(&["canon".into(), dir.path().join("example2.cub"), relabeled.clone()]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "equivalent\n"));
    let r = run(&["canon".into(), dir.path().join("example1.cub"), relabeled]);
    assert_eq!(r.stdout, "inequivalent\n");
}

#[test]
fn json_output_parses() {
    let dir = fixture_dir();
    let e1 = dir.path().join("example1.cub").display().to_string();
    let r = run(&["--format", "json", "analyze", &e1]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["cusps"], 6);
    assert_eq!(v["volume"], "16/3*pi^2");
    let r = run(&["--format", "json", "validate", &e1]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["valid"], true);
}

#[test]
fn surgery_writes_files() {
    let dir = fixture_dir();
    let out = dir.path().join("out.cub");
    let log = dir.path().join("log.jsonl");
    let r = run(&[
        "reduce".into(),
        dir.path().join("example1.cub").into_os_string(),
        "--cusps".into(),
        "3".into(),
        "--out".into(),
        out.clone().into_os_string(),
        "--log".into(),
        log.clone().into_os_string(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let c = cubekit::Cubulation::parse(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cubekit::cycles::cusp_profile(&c).len(), 3);
    let moves: Vec<serde_json::Value> =
        fs::read_to_string(&log).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(moves.len(), 3);
    assert_eq!(moves[2]["cusps_after"], 3);
}

#[test]
fn dot_labels_edges_with_maps() {
    let dir = fixture_dir();
    let r = run(&["graph".into(), dir.path().join("seed.cub")]);
    assert!(r.stdout.starts_with("graph cubulation {"));
    assert!(r.stdout.contains("0.-2 0.+2 [2 1 -3]"), "{}", r.stdout);
}
