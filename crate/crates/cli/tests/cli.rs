use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn hjchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hjchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = hjchain(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn expand_prints_chain() {
    let o = hjchain(&["expand", "19/7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[3,4,2]\n");
}

#[test]
fn evaluate_and_dual() {
    assert_eq!(stdout(&hjchain(&["evaluate", "3,4,2"])), "19/7\n");
    assert_eq!(stdout(&hjchain(&["dual", "9/5"])), "9/4 = [3,2,2,2]\n");
    let v = json(&["evaluate", "[2,5]", "--json"]);
    assert_eq!(v["value"], "9/5");
    assert_eq!(v["value_decimal"], "1.800000000000");
}

#[test]
fn decompose_json_document() {
    let v = json(&["decompose", "[2,3,4]", "--json"]);
    assert_eq!(v["core"], "[4]");
    assert_eq!(v["u"], 1);
    assert_eq!(v["steps"], "L");
}

#[test]
fn decompose_trace_lists_path() {
    let v = json(&["decompose", "[2,3,4]", "--json", "--trace"]);
    assert_eq!(v["path"], serde_json::json!(["[3,3]", "[2,3,4]"]));
}

#[test]
fn contract_trace() {
    let o = hjchain(&["contract", "[4,1,4]", "--trace"]);
    assert_eq!(stdout(&o), "step 1: contract index 1: [4,1,4] -> [3,3]\n[3,3]\n");
    let v = json(&["contract", "[4,1,4]", "--trace", "--json"]);
    assert_eq!(v["trace"][0]["after"], "[3,3]");
}

#[test]
fn discrepancies_are_exact_with_decimals() {
    let v = json(&["discrepancies", "[2,5]", "--json"]);
    assert_eq!(v["discrepancies"], serde_json::json!(["-1/3", "-2/3"]));
    assert_eq!(v["discrepancies_decimal"][1], "-0.666666666667");
    assert_eq!(v["correction"], "1/1");
}

#[test]
fn classify_reports_t_singularity() {
    let v = json(&["classify", "[3,2,2,3]", "--json"]);
    assert_eq!(v["t_singularity"]["d"], "4");
    assert_eq!(v["generalized_t_center_4"], true);
    assert_eq!(v["minimal_core"], false);
}

#[test]
fn survivors_ranges() {
    let v = json(&["survivors", "[2,5]", "--json"]);
    assert_eq!(v["contracted"], "[2,3,2,4]");
    assert_eq!(v["middle"], serde_json::json!([1, 2]));
}

#[test]
fn enumerate_counts() {
    assert_eq!(json(&["enumerate", "gent", "--max-length", "2", "--json"])["count"], 4);
    assert_eq!(json(&["enumerate", "gent", "--center", "[4]", "--max-length", "3", "--json"])["count"], 11);
    let cores = json(&["enumerate", "cores", "--max-weight", "2", "--max-length", "2", "--json"]);
    assert_eq!(cores["cores"][0], serde_json::json!({ "core": "[3,3]", "minimal": false }));
}

#[test]
fn accumulate_example_approaches_limit() {
    let o = hjchain(&["accumulate", "example210", "--n0", "3", "--kmax", "400", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("target=14/11"), "{out}");
    let v = json(&["accumulate", "example210", "--n0", "3", "--kmax", "400", "--json"]);
    let last = v["terms"][400]["kw2_decimal"].as_str().unwrap().parse::<f64>().unwrap();
    assert!((last - 14.0 / 11.0).abs() < 3e-3);
    assert_eq!(v["limit"]["monotonicity"], "strictly-increasing");
    assert_eq!(v["naive_m"]["m0"], "1");
}

#[test]
fn blowup_requires_ample_seed() {
    let o = hjchain(&["accumulate", "blowup", "--seed", "[4]", "--kmax", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_bounds_reports_slack() {
    let v = json(&[
        "verify-bounds", "[4]", "--ks2", "0", "--m", "0", "--lambda", "0", "--chi", "1", "--json",
    ]);
    assert_eq!(v["report"]["checks"][0]["slack"], "2/1");
    assert_eq!(v["all_hold"], true);
    let v = json(&[
        "verify-bounds", "[4,3,4]", "--ks2", "0", "--m", "3", "--lambda", "0", "--delta-case", "B1", "--l", "0", "--json",
    ]);
    assert_eq!(v["report"]["checks"][0]["verdict"], "fails");
}

#[test]
fn exit_codes() {
    assert_eq!(hjchain(&["expand", "4/2"]).status.code(), Some(1));
    assert_eq!(hjchain(&["decompose", "[2,2]"]).status.code(), Some(1));
    assert_eq!(hjchain(&["verify-bounds", "[4]", "--ks2", "0", "--m", "0"]).status.code(), Some(1));
    assert_eq!(
        hjchain(&["verify-bounds", "[4]", "--ks2", "0", "--m", "0", "--lambda", "0", "--delta-case", "B1"]).status.code(),
        Some(1)
    );
    let bad = hjchain(&["expand", "nope"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage"));
    assert_eq!(hjchain(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hjchain(&["expand", "19/7", "--bogus"]).status.code(), Some(2));
    assert_eq!(hjchain(&["expand"]).status.code(), Some(2));
}

#[test]
fn batch_mode_one_result_per_line() {
    let mut f = tempfile();
    writeln!(f.1, "19/7\n\n4/2\n9/5").unwrap();
    let path = f.0.to_str().unwrap();
    let o = hjchain(&["expand", "--input", path]);
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "[3,4,2]");
    assert!(lines[1].starts_with("error:"));
    assert_eq!(lines[2], "[2,5]");
    let o = hjchain(&["classify", "--input", path, "--json"]);
    for line in stdout(&o).lines() {
        let _: Value = serde_json::from_str(line).unwrap();
    }
    std::fs::remove_file(&f.0).ok();
    f = tempfile();
    writeln!(f.1, "[4]\nfoo").unwrap();
    let o = hjchain(&["decompose", "--input", f.0.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().count(), 2);
    std::fs::remove_file(&f.0).ok();
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "gent", "--max-length", "5", "--json", "--trace"];
    assert_eq!(hjchain(&args).stdout, hjchain(&args).stdout);
    let args = ["accumulate", "formation", "--seed", "5/1", "--kmax", "6", "--json", "--trace"];
    assert_eq!(hjchain(&args).stdout, hjchain(&args).stdout);
}

fn tempfile() -> (std::path::PathBuf, std::fs::File) {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static N: AtomicUsize = AtomicUsize::new(0);
    let p = std::env::temp_dir().join(format!(
        "hjchain-cli-{}-{}.txt",
        std::process::id(),
        N.fetch_add(1, Ordering::SeqCst)
    ));
    let f = std::fs::File::create(&p).unwrap();
    (p, f)
}
