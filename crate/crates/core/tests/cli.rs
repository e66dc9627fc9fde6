use std::path::Path;
use std::process::{Command, Output};

use coalition::game::PayoffTensor3;
use coalition::lab::io;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coalition"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bench_rps_omi_writes_tensor_and_solves() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("rps.json");
    let v = json(&run(&[
        "bench",
        "rps",
        "--variant",
        "omi",
        "--solve",
        "--tensor-out",
        path(&t),
    ]));
    assert!(v["numerical"]["sync_error"].as_f64().unwrap() < 1e-3);
    assert!(v["numerical"]["async_error"].as_f64().unwrap() < 1e-3);

    let report = dir.path().join("report.json");
    let r = json(&run(&["solve", "--tensor", path(&t), "--out", path(&report)]));
    assert_eq!(r["v_nash"].as_f64(), Some(0.0));
    assert!((r["v_sync"].as_f64().unwrap() + 2.0 / 3.0).abs() < 1e-3);
    assert!((r["v_async"].as_f64().unwrap() + 0.5).abs() < 1e-3);
    let saved: Value = io::read_json(&report).unwrap();
    assert_eq!(saved, r);
}

#[test]
fn family_omo_like_at_three() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("f.json");
    run(&[
        "bench",
        "family222",
        "--variant",
        "omo-like",
        "--alpha",
        "3",
        "--tensor-out",
        path(&t),
    ]);
    let r = json(&run(&["solve", "--tensor", path(&t), "--targets", "sync"]));
    assert!((r["v_sync"].as_f64().unwrap() + 1.5).abs() < 1e-3);
    assert!(r["v_async"].is_null());
}

#[test]
fn generate_is_deterministic_and_valid() {
    let a = run(&["generate", "--n", "3", "--seed", "11"]);
    let b = run(&["generate", "--n", "3", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let t: PayoffTensor3 = serde_json::from_slice(&a.stdout).unwrap();
    assert!(t.validate_symmetry().pass);
}

#[test]
fn guts_value() {
    let v = json(&run(&["guts", "value", "--v", "0"]));
    assert!((v["value"].as_f64().unwrap() + 0.0055663).abs() < 1e-6);
    let v = json(&run(&["guts", "value", "--v", "-0.013"]));
    assert!((v["value"].as_f64().unwrap() + 0.0131198).abs() < 1e-6);
}

#[test]
fn fp_summary_counts_nash_runs() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("oe.json");
    run(&["bench", "odds-evens", "--variant", "omo", "--tensor-out", path(&t)]);
    let v = json(&run(&["fp", "--tensor", path(&t), "--iters", "500", "--trials", "20"]));
    assert_eq!(v["near_zero"].as_u64(), Some(20));
    let v = json(&run(&[
        "fp",
        "--tensor",
        path(&t),
        "--mode",
        "sync",
        "--iters",
        "2000",
        "--json",
    ]));
    assert!((v[0]["value_estimate"].as_f64().unwrap() + 1.0).abs() < 0.05);
}

#[test]
fn campaign_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.csv");
    let hist = dir.path().join("gap.csv");
    let report = dir.path().join("report.json");
    let out = run(&[
        "campaign",
        "gap",
        "--n",
        "3",
        "--trials",
        "8",
        "--seed",
        "2",
        "--samples-csv",
        path(&samples),
        "--histogram-csv",
        path(&hist),
        "--out",
        path(&report),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let read = io::read_samples_file(&samples).unwrap();
    let full: coalition::lab::CampaignReport = io::read_json(&report).unwrap();
    assert_eq!(read, full.samples);
    assert_eq!(io::read_histogram_file(&hist).unwrap(), full.stats.gap_histogram);
    assert_eq!(
        io::read_histogram_file(&dir.path().join("gap.theta.csv")).unwrap(),
        full.stats.theta_histogram
    );
    let text = std::fs::read_to_string(&samples).unwrap();
    assert!(text.starts_with("# coalition-lab gap-samples v1\ntrial,seed,v_sync,v_async,gap,theta\n"));
}

#[test]
fn config_file_sets_solver() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"solver": {"restarts": 3, "rng_seed": 4}}"#).unwrap();
    let t = dir.path().join("t.json");
    run(&["generate", "--n", "3", "--out", path(&t)]);
    let r = json(&run(&["--config", path(&cfg), "solve", "--tensor", path(&t)]));
    assert_eq!(r["diagnostics"]["restarts"].as_u64(), Some(3));
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2, \"entries\": [1.0]}").unwrap();
    let out = run(&["solve", "--tensor", path(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let mut e = coalition::game::random_symmetric_tensor(2, 0)
        .unwrap()
        .entries()
        .to_vec();
    e[0] = 0.5;
    let asym = dir.path().join("asym.json");
    io::write_json(&asym, &PayoffTensor3::new(2, e).unwrap()).unwrap();
    assert!(!run(&["solve", "--tensor", path(&asym), "--targets", "nash"])
        .status
        .success());
    assert!(run(&["solve", "--tensor", path(&asym)]).status.success());
    assert!(!run(&["guts", "value", "--v", "0.9"]).status.success());
}
