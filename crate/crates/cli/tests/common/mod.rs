#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_cubekit")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// A temporary directory holding the bundled fixtures.
pub fn fixture_dir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&["seed-fixtures".as_ref(), dir.path().as_os_str()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    dir
}

pub const FIXTURES: [&str; 5] = ["example1", "example2", "seed", "two_cusps_r4", "two_cusps_minus_i"];

/// Golden cases: name and arguments, with `@x` standing for fixture `x`.
/// Surgery commands get `--log` appended by the runner.
pub fn golden_cases() -> Vec<(String, Vec<String>, bool)> {
    let mut cases: Vec<(String, Vec<String>, bool)> = Vec::new();
    let mut add = |name: &str, args: &[&str], logs: bool| {
        cases.push((name.to_string(), args.iter().map(|s| s.to_string()).collect(), logs));
    };
    for f in FIXTURES {
        let at = format!("@{f}");
        add(&format!("validate_{f}"), &["validate", &at], false);
        add(&format!("analyze_{f}"), &["analyze", &at], false);
        add(&format!("analyze_json_{f}"), &["--format", "json", "analyze", &at], false);
        add(&format!("canon_{f}"), &["canon", &at], false);
        add(&format!("graph_{f}"), &["graph", &at], false);
    }
    add("canon_pair", &["canon", "@example1", "@example2"], false);
    add("search_one_cusp", &["search", "--n", "1", "--orientable", "--cusps", "1", "--monodromy", "I"], false);
    add("search_r4", &["search", "--n", "1", "--orientable", "--cusps", "2", "--monodromy", "R4"], false);
    add("search_minus_i", &["search", "--n", "1", "--orientable", "--cusps", "2", "--monodromy", "-I"], false);
    add("search_all_opposite", &["search", "--n", "1", "--orientable", "--cusps", "6", "--pattern", "opposite", "--all"], false);
    add("census_12", &["census", "--n", "1", "--orientable", "--cusps", "12"], false);
    add("census_json_13", &["--format", "json", "census", "--n", "1", "--orientable", "--cusps", "13"], false);
    add("flower_example1", &["flower", "@example1"], true);
    add("split_example2", &["split", "@example2", "--count", "3"], true);
    add("reduce_example1", &["reduce", "@example1", "--cusps", "1"], true);
    add("reduce_example2", &["reduce", "@example2", "--cusps", "30"], true);
    add("cover_seed", &["cover", "@seed", "--n", "3"], true);
    add("fill_seed", &["fill", "@seed", "--slopes", "0,0,1"], false);
    add("fill_example1", &["fill", "@example1", "--slopes", "0,0,1;1,1,1;3,0,1;0,3,1;1,0,0;2,2,1", "--threshold", "strict"], false);
    add("fill_json_seed", &["--format", "json", "fill", "@seed", "--slopes", "0,0,1"], false);
    cases
}

/// Full transcript of one case: exit code, stdout and the move log.
pub fn transcript(dir: &Path, args: &[String], logs: bool, jobs: usize) -> String {
    let scratch = tempfile::tempdir().unwrap();
    let log = scratch.path().join("moves.jsonl");
    let mut argv: Vec<String> = vec!["--jobs".into(), jobs.to_string()];
    for a in args {
        argv.push(match a.strip_prefix('@') {
            Some(name) => dir.join(format!("{name}.cub")).display().to_string(),
            None => a.clone(),
        });
    }
    if logs {
        argv.push("--log".into());
        argv.push(log.display().to_string());
    }
    let r = run(&argv);
    let mut s = format!("exit {}\n{}", r.code, r.stdout);
    if logs {
        s.push_str("--- moves\n");
        s.push_str(&fs::read_to_string(&log).unwrap_or_default());
    }
    s
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// Compares every case under several `--jobs` settings, twice each, against
/// its golden file. `UPDATE_GOLDEN=1` rewrites the files instead.
pub fn check_goldens() -> Vec<(String, Result<(), String>)> {
    let dir = fixture_dir();
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    golden_cases()
        .into_iter()
        .map(|(name, args, logs)| {
            let path = golden_path(&name);
            if update {
                fs::write(&path, transcript(dir.path(), &args, logs, 1)).unwrap();
            }
            let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()));
            let result = expected.and_then(|expected| {
                for jobs in [1, 2, 4, 1, 2, 4] {
                    let got = transcript(dir.path(), &args, logs, jobs);
                    if got != expected {
                        return Err(format!("output differs with --jobs {jobs}"));
                    }
                }
                Ok(())
            });
            (name, result)
        })
        .collect()
}
