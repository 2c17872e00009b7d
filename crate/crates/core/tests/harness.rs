//! Sweep harness and command-line behaviour on small configurations.

use std::path::Path;
use std::process::Command;

use dunkl::harness::report::{read_csv, read_json};
use dunkl::harness::{emit_report, run_experiment, ExperimentConfig, Format};
use dunkl::inequalities::TheoremId;
use dunkl::DunklError;

fn config(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).unwrap()
}

const HY_GAUSSIAN: &str = r#"{
    "lambdas": [0.7],
    "corpus": [{"generator": "gaussian", "scale": 0.5}],
    "theorems": [{"id": "HAUSDORFF_YOUNG", "p": [1, 1.25, 1.5, 2]}],
    "equivalences": null
}"#;

/// Coarse enough that doubling the grid moves the Jackson ratio by ~17%.
const COARSE_JACKSON: &str = r#"{
    "lambdas": [0.7],
    "grid": {"radius": 40, "panels": 4, "nodes_per_panel": 16},
    "corpus": [{"generator": "gaussian", "scale": 0.5}],
    "theorems": [{"id": "JACKSON_11", "p": [2, 3], "r": [1], "n_or_delta": [1]}],
    "equivalences": null
}"#;

#[test]
fn empty_theorem_list_echoes_the_config() {
    let cfg = config(
        r#"{"lambdas": [0.7], "corpus": [{"generator": "gaussian", "scale": 0.5}], "theorems": [], "equivalences": null}"#,
    );
    let report = run_experiment(&cfg).unwrap();
    assert!(report.rows.is_empty() && report.summaries.is_empty() && report.brackets.is_empty());
    assert_eq!(report.config, cfg);
}

#[test]
fn hausdorff_young_on_a_gaussian_respects_the_unit_constant() {
    let report = run_experiment(&config(HY_GAUSSIAN)).unwrap();
    let s = report.summary(TheoremId::HausdorffYoung).unwrap();
    assert_eq!(s.rows, 4);
    assert!(s.max_ratio <= 1.0 + 1e-6, "{}", s.max_ratio);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let cfg = config(HY_GAUSSIAN);
    let (a, b) = (run_experiment(&cfg).unwrap(), run_experiment(&cfg).unwrap());
    let (da, db) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (r, d) in [(&a, da.path()), (&b, db.path())] {
        for f in [Format::Csv, Format::Json] {
            emit_report(r, f, d).unwrap();
        }
    }
    let bytes = |d: &Path, f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(bytes(da.path(), "ratios.csv"), bytes(db.path(), "ratios.csv"));
    assert_eq!(bytes(da.path(), "report.json"), bytes(db.path(), "report.json"));
    assert_eq!(read_csv(&da.path().join("ratios.csv")).unwrap(), a.rows);
    assert_eq!(read_json(&da.path().join("report.json")).unwrap(), a);
}

#[test]
fn svg_output_has_one_chart_per_theorem() {
    let report = run_experiment(&config(HY_GAUSSIAN)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = emit_report(&report, Format::SvgLines, dir.path()).unwrap();
    assert_eq!(files, vec![dir.path().join("HAUSDORFF_YOUNG.svg")]);
    assert!(std::fs::read_to_string(&files[0]).unwrap().starts_with("<svg"));
}

#[test]
fn unknown_generators_and_fields_are_config_errors() {
    for bad in [
        r#"{"corpus": [{"generator": "sawtooth"}]}"#,
        r#"{"lambdas": [-0.7]}"#,
        r#"{"theorems": [{"id": "JACKSON_11", "p": [2], "colour": 3}]}"#,
    ] {
        assert!(matches!(ExperimentConfig::from_json(bad), Err(DunklError::Config(_))), "{bad}");
    }
}

#[test]
fn failures_carry_their_provenance() {
    // far too wide for the default grid
    let cfg = config(
        r#"{"lambdas": [0.7], "corpus": [{"generator": "gaussian", "scale": 1e-4}],
            "theorems": [{"id": "HAUSDORFF_YOUNG", "p": [1.5]}], "equivalences": null}"#,
    );
    let Err(DunklError::Aggregate(errors)) = run_experiment(&cfg) else {
        panic!("expected an aggregate error");
    };
    let DunklError::Sweep { corpus, source, .. } = &errors[0] else {
        panic!("expected a tagged child, got {:?}", errors[0]);
    };
    assert_eq!(corpus, "gaussian(0.0001)@lambda=0.7");
    assert!(matches!(**source, DunklError::Truncation { .. }));
}

#[test]
fn sharpness_runs_on_the_extremal_family_only() {
    let cfg = config(
        r#"{"lambdas": [0.7],
            "corpus": [{"generator": "gaussian", "scale": 0.5}, {"generator": "extremal", "eps": 0.1, "max_n": 8}],
            "theorems": [{"id": "K1_SHARPNESS", "p": [1.5], "n_or_delta": [4, 8, 16]}],
            "equivalences": null}"#,
    );
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.rows.len(), 2);
    assert!(report.rows.iter().all(|r| r.corpus_id.starts_with("extremal")));
    let skipped: Vec<_> = report.skipped.iter().map(|s| (s.corpus_id.as_str(), s.cells)).collect();
    assert!(skipped.contains(&("gaussian(0.5)@lambda=0.7", 3)), "{skipped:?}");
    assert!(skipped.iter().any(|(id, n)| id.starts_with("extremal") && *n == 1), "{skipped:?}");
}

#[test]
fn coarse_grids_are_flagged_by_refinement() {
    let mut cfg = config(COARSE_JACKSON);
    cfg.refine = true;
    let report = run_experiment(&cfg).unwrap();
    assert!(report.unstable());
    let d = report.refinement.iter().find(|d| d.quantity == "JACKSON_11:max_ratio").unwrap();
    assert!(d.flagged && d.rel_change >= 0.10);
}

fn dunkl(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dunkl")).args(args).env("DUNKL_THREADS", "1").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn cli_verify_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "hy.json", HY_GAUSSIAN);
    let out = dir.path().join("out");
    let run = dunkl(&[
        "verify",
        "--theorem",
        "HAUSDORFF_YOUNG",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    for f in ["ratios.csv", "report.json", "HAUSDORFF_YOUNG.svg"] {
        assert!(out.join(f).exists(), "{f}");
    }

    // re-emitting from the saved JSON reproduces the CSV
    let again = dir.path().join("again");
    let run = dunkl(&[
        "report",
        "--input",
        out.join("report.json").to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(
        std::fs::read(out.join("ratios.csv")).unwrap(),
        std::fs::read(again.join("ratios.csv")).unwrap()
    );
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    let bad = write(dir.path(), "bad.json", r#"{"corpus": [{"generator": "sawtooth"}]}"#);
    assert_eq!(dunkl(&["verify", "--all", "--config", &bad, "--out", out]).status.code(), Some(1));

    let hy = write(dir.path(), "hy.json", HY_GAUSSIAN);
    let missing = dunkl(&["verify", "--theorem", "PITT_1", "--config", &hy, "--out", out]);
    assert_eq!(missing.status.code(), Some(1));

    let coarse = write(dir.path(), "coarse.json", COARSE_JACKSON);
    let run = dunkl(&["verify", "--all", "--config", &coarse, "--refine", "--out", out]);
    assert_eq!(run.status.code(), Some(2), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("FLAGGED JACKSON_11:max_ratio"));

    let threads = Command::new(env!("CARGO_BIN_EXE_dunkl"))
        .args(["verify", "--all", "--config", &hy, "--out", out])
        .env("DUNKL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(1));
}

#[test]
fn cli_transform_and_scalar_commands() {
    let dir = tempfile::tempdir().unwrap();
    let gen = r#"{"generator":"gaussian","scale":0.5}"#;
    let run = dunkl(&["transform", "--generator", gen, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let spatial = dir.path().join("spatial.csv");
    assert!(spatial.exists() && dir.path().join("spectral.csv").exists());

    // the written profile reads back through --input
    let run =
        dunkl(&["modulus", "--input", spatial.to_str().unwrap(), "--delta", "0.5", "--p", "2"]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let w: f64 = String::from_utf8_lossy(&run.stdout).trim().parse().unwrap();
    assert!(w > 0.0 && w < 2.0);

    let run = dunkl(&["besov", "--generator", gen, "--s", "0.5", "--method", "definition"]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("DEFINITION"));
}
