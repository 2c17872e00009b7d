//! A small sweep through the harness, written as CSV, JSON and SVG.

use dunkl::harness::{emit_report, run_experiment, ExperimentConfig, Format};

const CONFIG: &str = r#"{
  "lambdas": [0.7],
  "corpus": [
    {"generator": "gaussian", "scale": 0.5},
    {"generator": "gaussian_mixture", "terms": 3}
  ],
  "theorems": [
    {"id": "HAUSDORFF_YOUNG", "p": [1.25, 1.5, 2]},
    {"id": "JACKSON_11", "p": [1.5, 3], "r": [1], "n_or_delta": [2, 4, 8]}
  ],
  "equivalences": null,
  "refine": true
}"#;

fn main() -> dunkl::Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?;
    let report = run_experiment(&cfg)?;
    for s in &report.summaries {
        println!("{:<16} rows {:>3} max ratio {:.4e}", s.theorem.to_string(), s.rows, s.max_ratio);
    }
    for d in &report.refinement {
        println!(
            "{:<28} drift {:.2e}{}",
            d.quantity,
            d.rel_change,
            if d.flagged { "  FLAGGED" } else { "" }
        );
    }
    let dir = std::env::temp_dir().join("dunkl-sweep-example");
    for f in [Format::Csv, Format::Json, Format::SvgLines] {
        for path in emit_report(&report, f, &dir)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
