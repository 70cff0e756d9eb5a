use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetterberg"))
        .args(args)
        .env_remove("ZETTERBERG_CHECKPOINT_DIR")
        .output()
        .expect("spawn zetterberg")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn classify_examples() {
    assert_eq!(json(&["classify", "7"])["ell"], 3);
    let nine = json(&["classify", "9"]);
    assert_eq!(nine["in_s"], true);
    assert!(nine["ell"].is_null());
    let big = json(&["classify", "340282366920938463463374607431768211455"]);
    assert_eq!(big["ell"], 128);
    assert!(big["prime_power"].is_null());
    assert_eq!(code(&run(&["classify", "8"])), 3);
    assert_eq!(code(&run(&["classify", "x"])), 3);
}

#[test]
fn bad_arguments_exit_3() {
    assert_eq!(code(&run(&["nonsense"])), 3);
    assert_eq!(code(&run(&["code", "--q0", "7", "--kind", "half"])), 3);
    assert_eq!(code(&run(&["code", "--q0", "6"])), 3);
    assert_eq!(code(&run(&["iq0", "--q0", "7", "--shard", "4/4"])), 3);
    assert_eq!(code(&run(&["--workers", "0", "s-star", "--q0", "7"])), 3);
    assert_eq!(code(&run(&["s-star", "--q0", "7", "--format", "csv"])), 3);
    assert!(run(&["--help"]).status.success());
}

#[test]
fn code_reports() {
    let t = json(&["code", "--q0", "7", "--s", "3", "--kind", "twisted-half"]);
    assert_eq!((t["n"].as_u64(), t["dimension"].as_u64(), t["rho"].as_u64()), (Some(172), Some(166), Some(3)));
    assert_eq!(t["kind"], "twisted_half");
    let d = t["d_bounds"].as_array().unwrap();
    assert!(d[0].as_u64().unwrap() >= 3 && d[1].as_u64().unwrap() <= 4);
    let f = json(&["code", "--q0", "7", "--s", "1", "--kind", "full"]);
    assert_eq!(f["rho"], 2);
    let hist: u64 = f["histogram"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(hist, 49);
}

#[test]
fn code_memory_refusal() {
    let out = run(&["code", "--q0", "23", "--s", "3"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&(5 * 23u64.pow(6)).to_string()), "{err}");
}

#[test]
fn code_csv() {
    let out = run(&["code", "--q0", "7", "--s", "1", "--format", "csv"]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = body.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(',').count() == 8));
}

#[test]
fn iq0_decisions() {
    let r = json(&["iq0", "--q0", "23", "--s", "3"]);
    assert_eq!(r["in_i"], false);
    assert_eq!(r["even"]["scanned"], 23u64.pow(3) - 1);
    let r = json(&["iq0", "--q0", "7", "--s", "3"]);
    assert_eq!(r["in_i"], true);
    assert_eq!(json(&["iq0", "--q0", "7", "--s", "1"])["in_i"], false);
    assert_eq!(code(&run(&["iq0", "--q0", "9"])), 3);
}

#[test]
fn iq0_deterministic_bytes() {
    let args = ["--no-timing", "--workers", "3", "iq0", "--q0", "31", "--s", "3", "--block", "1000"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn iq0_partial_shard_is_undecided() {
    let r = json(&["iq0", "--q0", "47", "--s", "3", "--shard", "1/4", "--parity", "even"]);
    assert!(r["in_i"].is_null());
    assert!(r["odd"].is_null());
    let scanned = r["even"]["scanned"].as_u64().unwrap();
    assert_eq!(scanned, 2 * 103822 / 4 - 103822 / 4);
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_vec(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn shards_merge_to_full_scan() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--no-timing", "iq0", "--q0", "47", "--s", "3", "--parity", "odd"];
    let mut files = Vec::new();
    for k in 0..3 {
        let shard = format!("{k}/3");
        let mut args = base.to_vec();
        args.extend(["--shard", &shard]);
        let r = json(&args);
        files.push(write(dir.path(), &format!("s{k}.json"), &r["odd"]));
    }
    let mut args = vec!["--no-timing", "merge"];
    args.extend(files.iter().map(String::as_str));
    let merged = json(&args);
    let full = json(&base)["odd"].clone();
    assert_eq!(merged["holds"], full["holds"]);
    assert_eq!(merged["scanned"], full["scanned"]);
    assert_eq!(merged["witness"], full["witness"]);

    args.pop();
    assert_eq!(code(&run(&args)), 3);
}

#[test]
fn interrupt_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().to_str().unwrap();
    let base = ["--no-timing", "--checkpoint-dir", ck, "iq0", "--q0", "47", "--s", "3", "--parity", "even", "--block", "5000"];
    let mut first = base.to_vec();
    first.extend(["--max-blocks", "4"]);
    let out = run(&first);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    let saved: Value = serde_json::from_slice(
        &std::fs::read(dir.path().join("npi-47-3-even-0of1.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(saved["watermark"], 20000);

    let resumed = json(&base);
    let mut plain = vec!["--no-timing"];
    plain.extend(&base[3..]);
    let fresh = json(&plain);
    assert_eq!(resumed["even"]["holds"], false);
    assert_eq!(resumed, fresh);

    // the env var is honoured as well
    let out = Command::new(env!("CARGO_BIN_EXE_zetterberg"))
        .args(&base[3..])
        .env("ZETTERBERG_CHECKPOINT_DIR", ck)
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let out = run(&["--output", path.to_str().unwrap(), "s-star", "--q0", "31"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["s_star"], 9);
}

#[test]
fn s_star_and_curves() {
    for (q0, want) in [(7, 3), (23, 7), (31, 9), (47, 11)] {
        assert_eq!(json(&["s-star", "--q0", &q0.to_string()])["s_star"], want);
        assert_eq!(json(&["curves", "s-star", "--q0", &q0.to_string()])["s_star"], want);
    }
    let both = json(&["curves", "count", "--q0", "7", "--s", "3", "--direct"]);
    for c in both.as_array().unwrap() {
        assert_eq!(c["count"]["n_chi"], c["direct"]["total"]);
        assert_eq!(c["count"]["hasse_weil"], true);
    }
    let even = json(&["curves", "count", "--q0", "7", "--s", "1", "--parity", "even"]);
    assert_eq!(even["count"]["n_s"], 0);
    assert_eq!(even["count"]["genus"], "5");
}

#[test]
fn audits() {
    let pi = json(&["pi-check", "--q0", "23"]);
    assert_eq!(pi["even"]["unsolved"].as_array().unwrap().len(), 0);
    assert_eq!(pi["odd"]["unsolved"].as_array().unwrap().len(), 0);
    let pi = json(&["pi-check", "--q0", "7", "--solutions"]);
    assert_eq!(pi["even"]["solutions"].as_array().unwrap().len(), 6);
    assert_eq!(code(&run(&["pi-check", "--q0", "9"])), 3);

    let d = json(&["delta-audit", "--q0", "7", "--s", "3", "--alphas", "10"]);
    assert_eq!(d["even"].as_array().unwrap().len(), 10);
    let w = json(&["weil-audit", "--q0", "7"]);
    assert_eq!(w["even"]["sum_k_minus_x2"], 1);
    assert_eq!(w["even"]["rows"].as_array().unwrap().len(), 4);
    assert_eq!(w["odd"]["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_fast_tier() {
    let out = run(&["--no-timing", "verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v.as_array().unwrap();
    assert_eq!(checks.len(), 11);
    assert!(checks.iter().all(|c| c["passed"] == true && c["tier"] == "fast"));
}
