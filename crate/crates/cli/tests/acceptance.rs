//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p tomofix-cli --test acceptance -- --nocapture`.

use std::process::Command;
use std::time::{Duration, Instant};

use tomofix_cli::golden::{run_group, Check};
use tomofix_cli::verify::{run_suites, SuiteSizes, DEFAULT_SEED};

/// Runtime limits per criterion, in seconds.
const LIMIT_ZERO_LOCUS: f64 = 10.0;
const LIMIT_BOUNDED: f64 = 5.0;
const LIMIT_POLY: f64 = 30.0;
const LIMIT_MODP: f64 = 60.0;
const LIMIT_BALANCED: f64 = 30.0;

/// Case counts for criterion 6.
const RING_CASES: usize = 500;
const TREE_CASES: usize = 1000;
/// Synthesized arrays for criterion 3.
const STEP_E_CASES: usize = 20;

/// Exact arithmetic throughout: every comparison has zero tolerance.
const TOLERANCE: i64 = 0;

struct Verdict {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn group_verdict(id: u32, title: &'static str, group: &str, limit: f64, extra: impl FnOnce() -> (bool, String)) -> Verdict {
    let ((checks, (extra_ok, extra_detail)), elapsed) = timed(|| (run_group(group), extra()));
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let secs = elapsed.as_secs_f64();
    let mut detail = format!("{} checks, {:.2} s of {limit} s", checks.len(), secs);
    if !extra_detail.is_empty() {
        detail.push_str(&format!(", {extra_detail}"));
    }
    for c in &failed {
        detail.push_str(&format!("; failed: {} {}", c.name, c.detail));
    }
    Verdict { id, title, passed: failed.is_empty() && extra_ok && secs < limit && !checks.is_empty(), detail }
}

fn determinism() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_tomofix");
    let dir = tempfile::tempdir().expect("temp dir");
    let run = |threads: &str| {
        let manifest = dir.path().join(format!("manifest-{threads}.json"));
        let out = Command::new(bin)
            .args(["reproduce-paper", "--threads", threads, "--manifest"])
            .arg(&manifest)
            .output()
            .expect("run tomofix");
        let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&manifest).expect("manifest")).expect("json");
        (out.status.code(), out.stdout, m["digest"].as_str().unwrap_or_default().to_string())
    };
    let (c1, o1, d1) = run("1");
    let (c8, o8, d8) = run("8");
    let passed = c1 == Some(0) && c8 == Some(0) && o1 == o8 && d1 == d8 && !o1.is_empty();
    Verdict {
        id: 7,
        title: "determinism across 1 and 8 threads",
        passed,
        detail: format!("{} bytes, digest {}, exit codes {:?}/{:?}", o1.len(), &d1[..d1.len().min(16)], c1, c8),
    }
}

#[test]
fn acceptance_criteria() {
    assert_eq!(TOLERANCE, 0);
    let mut verdicts = Vec::new();
    verdicts.push(group_verdict(1, "zero locus", "zero-locus", LIMIT_ZERO_LOCUS, || (true, String::new())));
    verdicts.push(group_verdict(2, "bounded arrays", "bounded", LIMIT_BOUNDED, || (true, String::new())));
    verdicts.push(group_verdict(3, "polynomial growth", "poly", LIMIT_POLY, || {
        let sizes = SuiteSizes { ring_cases: 0, tree_cases: 0, step_cases: STEP_E_CASES, basis_cases: 0 };
        let step = run_suites(DEFAULT_SEED, sizes).into_iter().find(|r| r.name == "step (E) soundness").expect("suite");
        (step.passed() && step.cases == STEP_E_CASES, format!("{} step (E) arrays, {} failures", step.cases, step.failures))
    }));
    verdicts.push(group_verdict(4, "mod p", "modp", LIMIT_MODP, || (true, String::new())));
    verdicts.push(group_verdict(5, "balanced arrays", "balanced", LIMIT_BALANCED, || (true, String::new())));

    let sizes = SuiteSizes { ring_cases: RING_CASES, tree_cases: TREE_CASES, step_cases: 0, basis_cases: 0 };
    let (suites, elapsed) = timed(|| run_suites(DEFAULT_SEED, sizes));
    let relevant: Vec<_> = suites.iter().filter(|r| r.cases > 0).collect();
    let failures: usize = relevant.iter().map(|r| r.failures).sum();
    let rings = relevant.iter().filter(|r| r.name.starts_with("laws") && r.cases == RING_CASES).count();
    let trees = relevant.iter().any(|r| r.name.starts_with("canonical zero") && r.cases == TREE_CASES);
    verdicts.push(Verdict {
        id: 6,
        title: "property suites",
        passed: failures == 0 && rings == 5 && trees,
        detail: format!("{rings} rings x {RING_CASES} cases, {TREE_CASES} trees, {failures} failures, {:.2} s", elapsed.as_secs_f64()),
    });
    verdicts.push(determinism());

    verdicts.sort_by_key(|v| v.id);
    for v in &verdicts {
        println!("criterion {} [{}]: {} ({})", v.id, v.title, if v.passed { "PASS" } else { "FAIL" }, v.detail);
    }
    let failed: Vec<u32> = verdicts.iter().filter(|v| !v.passed).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
