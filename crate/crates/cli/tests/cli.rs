//! End-to-end runs of the `planted` binary.

use std::path::Path;
use std::process::{Command, Output};

use planted_core::combinatorics::MatchingTable;
use planted_core::experiments::{read_records_csv, CellSummary};
use planted_core::theory::TheoryProfile;

fn planted(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planted")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Vec<u8> {
    let out = planted(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn every_subcommand_has_help() {
    let subs: &[&[&str]] = &[
        &["gen"],
        &["solve"],
        &["theory"],
        &["augmenting"],
        &["augmenting", "instance"],
        &["augmenting", "cycles"],
        &["augmenting", "edge-prob"],
        &["augmenting", "subgraph"],
        &["combinat"],
        &["combinat", "matchings"],
        &["combinat", "forests"],
        &["combinat", "cycle-counts"],
        &["combinat", "mgf-bound"],
        &["track"],
        &["track", "run"],
        &["track", "tmax"],
        &["sweep"],
        &["verify"],
    ];
    for sub in subs {
        let mut args = sub.to_vec();
        args.push("--help");
        let text = String::from_utf8(ok(&args)).unwrap();
        assert!(text.contains("--seed") && text.contains("--format"), "{sub:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(planted(&["gen", "--n", "3", "--d", "2", "--sigma2", "0.1", "--bogus"]).status.code(), Some(1));
    assert_eq!(planted(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(planted(&["solve", "--n", "5"]).status.code(), Some(1));
    let bad = planted(&["gen", "--n", "0", "--d", "2", "--sigma2", "0.1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
    assert_eq!(planted(&["theory", "--n", "1", "--d", "2", "--sigma2", "0.1"]).status.code(), Some(2));
}

#[test]
fn theory_profile_is_json() {
    let out = ok(&["theory", "--n", "1000", "--d", "28", "--sigma2", "0.3", "--tmax", "50"]);
    let p: TheoryProfile = serde_json::from_slice(&out).unwrap();
    assert_eq!(p.c_curve.len(), 49);
    let csv = String::from_utf8(ok(&["theory", "--n", "1000", "--d", "28", "--sigma2", "0.3", "--format", "csv"])).unwrap();
    assert!(csv.starts_with("t,riemann_sum,cycle_mass_exponent\n2,"));
}

#[test]
fn verify_passes_on_a_correct_build() {
    let out = planted(&["verify", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let checks: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(checks.len(), 11);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}

#[test]
fn instances_round_trip_through_every_file_form() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("inst.json");
    let csv = dir.path().join("inst.csv");
    let dump = dir.path().join("inst.bin");
    let base = ["gen", "--n", "9", "--d", "3", "--sigma2", "0.05", "--seed", "9"];
    let mut a = base.to_vec();
    a.extend(["--out", path_str(&json), "--dump", path_str(&dump)]);
    ok(&a);
    let mut a = base.to_vec();
    a.extend(["--format", "csv", "--out", path_str(&csv)]);
    ok(&a);
    let solve = |p: &Path| -> serde_json::Value {
        serde_json::from_slice(&ok(&["solve", "--instance", path_str(p), "--brute-force"])).unwrap()
    };
    let (a, b, c) = (solve(&json), solve(&csv), solve(&dump));
    assert_eq!(a["assignment"], b["assignment"]);
    assert_eq!(a["assignment"], c["assignment"]);
    assert_eq!(a["objective"], b["objective"]);
    assert_eq!(a["planted"], c["planted"]);
    assert_eq!(a["objective"], a["brute_force_objective"]);
    let direct: serde_json::Value = serde_json::from_slice(&ok(&[
        "solve", "--n", "9", "--d", "3", "--sigma2", "0.05", "--seed", "9", "--solver", "hungarian",
    ]))
    .unwrap();
    assert_eq!(direct["assignment"], a["assignment"]);
}

#[test]
fn sweep_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"ns": [20, 40], "d_rule": {"rule": "constant", "d": 2},
            "sigma2": {"rule": "threshold_multiples", "threshold": "perfect", "multipliers": [1.0, 10.0]},
            "trials": 4, "estimators": ["mle", "greedy_inner", "aug_matching_lower_bound"]}"#,
    )
    .unwrap();
    let summary = dir.path().join("summary.json");
    let args = ["sweep", "--config", path_str(&cfg), "--seed", "4", "--summary", path_str(&summary)];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let recs = read_records_csv(first.as_slice()).unwrap();
    assert_eq!(recs.len(), 2 * 2 * 4 * 3);
    let cells: Vec<CellSummary> = serde_json::from_slice(&std::fs::read(&summary).unwrap()).unwrap();
    assert_eq!(cells.len(), 12);
    let other = ok(&["sweep", "--config", path_str(&cfg), "--seed", "5"]);
    assert_ne!(first, other);
    let fewer = ok(&["sweep", "--config", path_str(&cfg), "--trials", "1", "--format", "json"]);
    let cells: Vec<CellSummary> = serde_json::from_slice(&fewer).unwrap();
    assert!(cells.iter().all(|c| c.trials == 1));
}

#[test]
fn shipped_recipes_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../recipes");
    let sweep = std::fs::read_to_string(root.join("error_rate.json")).unwrap();
    planted_core::experiments::SweepConfig::from_json(&sweep).unwrap();
    let track = std::fs::read_to_string(root.join("tracking_tmax.json")).unwrap();
    let _: planted_core::tracking::TrackingRecipe = serde_json::from_str(&track).unwrap();
    let counts = ok(&["combinat", "cycle-counts", "--config", path_str(&root.join("cycle_counts.json"))]);
    let dists: Vec<serde_json::Value> = serde_json::from_slice(&counts).unwrap();
    assert_eq!(dists.len(), 9);
}

#[test]
fn tracking_outputs() {
    let csv = String::from_utf8(ok(&["track", "run", "--n", "10", "--d", "2", "--delta", "0.01", "--k", "5"])).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(csv.starts_with("step,fixed_points,step_errors\n0,10,0\n"));
    let tmax = ok(&[
        "track", "tmax", "--n", "6", "--d", "1", "--deltas", "0.01,0.001", "--trials", "10", "--k-cap", "5000",
    ]);
    let v: Vec<serde_json::Value> = serde_json::from_slice(&tmax).unwrap();
    assert_eq!(v[0]["estimates"].as_array().unwrap().len(), 2);
}

#[test]
fn combinatorics_and_augmenting_outputs() {
    let m: MatchingTable = serde_json::from_slice(&ok(&["combinat", "matchings", "--t", "6"])).unwrap();
    assert_eq!(m.counts, vec![1, 6, 9, 2]);
    let f = String::from_utf8(ok(&["combinat", "forests", "--t", "4", "--format", "csv"])).unwrap();
    assert_eq!(f, "k,forests\n0,1\n1,8\n2,20\n3,16\n4,0\n");
    let b: serde_json::Value = serde_json::from_slice(&ok(&["combinat", "mgf-bound", "--ell", "4", "--a", "4"])).unwrap();
    assert_eq!(b["ok"], true);
    let inst: serde_json::Value = serde_json::from_slice(&ok(&[
        "augmenting", "instance", "--n", "60", "--d", "2", "--sigma2", "0.01", "--seed", "3",
    ]))
    .unwrap();
    assert_eq!(inst["bound_holds"], true);
    assert_eq!(inst["cycles_cover_errors"], true);
    let cycles = String::from_utf8(ok(&[
        "augmenting", "cycles", "--n", "6", "--d", "1", "--sigma2", "0.5", "--tmax", "3", "--format", "csv",
    ]))
    .unwrap();
    assert!(cycles.starts_with("length,vertices,margin\n"));
    let e: serde_json::Value = serde_json::from_slice(&ok(&[
        "augmenting", "edge-prob", "--d", "2", "--sigma2", "0.05", "--trials", "20000", "--sampler", "two_point",
    ]))
    .unwrap();
    assert!(e["p"].as_f64().unwrap() > 0.0);
    let s: serde_json::Value = serde_json::from_slice(&ok(&[
        "augmenting", "subgraph", "--t", "2", "--d", "2", "--sigma2", "0.1", "--trials", "2000",
    ]))
    .unwrap();
    assert!(s["frequency"].as_f64().unwrap() <= s["bound"].as_f64().unwrap() + 0.02);
    assert_eq!(planted(&["augmenting", "edge-prob", "--d", "2", "--sigma2", "0.05", "--sampler", "x"]).status.code(), Some(2));
}
