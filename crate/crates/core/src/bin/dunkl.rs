//! Command-line front end. `DUNKL_THREADS` sets the worker count.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dunkl::besov::{ApproximantChoice, BesovMethod, BesovParams, DEFAULT_DEPTH};
use dunkl::harness::{
    build_corpus, emit_report, ExperimentConfig, Format, GeneratorSpec, GridSpec, Member, Report,
};
use dunkl::inequalities::TheoremId;
use dunkl::io::{read_profile, write_profile};
use dunkl::measure::{RadialProfile, Spatial};
use dunkl::smoothness::Analysis;
use dunkl::transform::dunkl_transform_radial;
use dunkl::{DunklError, Result};

/// Slack allowed on inequalities whose constant is exactly one.
const CONSTANT_ONE_SLACK: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "dunkl",
    version,
    about = "Radial Dunkl transforms, moduli, Besov norms and inequality sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transform a profile and write both sides as CSV with sidecars.
    Transform {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Modulus of smoothness `ω_m(f, δ)_p`.
    Modulus {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2.0)]
        m: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 2.0, value_parser = parse_exponent)]
        p: f64,
    },
    /// Besov norm by one or all characterizations.
    Besov {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "2", value_parser = parse_exponent)]
        theta: f64,
        /// Modulus order; defaults to `s + 1`.
        #[arg(long)]
        r: Option<f64>,
        /// One of the method names; all methods when omitted.
        #[arg(long)]
        method: Option<BesovMethod>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
    },
    /// Run inequality sweeps and write the report.
    Verify(Verify),
    /// Re-emit a saved JSON report in other formats.
    Report {
        /// A `report.json` written by `verify`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "csv,svg-lines")]
        format: Vec<Format>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Where a single profile comes from.
#[derive(Args)]
struct Input {
    /// Generator as JSON, e.g. `{"generator":"gaussian","scale":0.5}`.
    #[arg(long, conflicts_with = "input", required_unless_present = "input", value_parser = parse_generator)]
    generator: Option<GeneratorSpec>,
    /// A spatial profile CSV with its sidecar.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0.7)]
    lambda: f64,
    /// `R,panels,nodes`.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
}

#[derive(Args)]
#[group(id = "selection", required = true, args = ["theorem", "all"])]
struct Verify {
    /// Restrict the sweep to these theorem ids.
    #[arg(long, value_delimiter = ',')]
    theorem: Vec<TheoremId>,
    /// Every configured theorem plus the equivalence brackets.
    #[arg(long)]
    all: bool,
    /// JSON experiment config; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's `λ` list.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<f64>,
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Repeat on the doubled grid and flag drifting summaries.
    #[arg(long)]
    refine: bool,
}

fn parse_generator(s: &str) -> std::result::Result<GeneratorSpec, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    GridSpec::parse(s).map_err(|e| e.to_string())
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        _ => s.parse().map_err(|e: std::num::ParseFloatError| e.to_string()),
    }
}

impl Input {
    fn load(&self) -> Result<RadialProfile> {
        if let Some(path) = &self.input {
            return read_profile::<Spatial>(path);
        }
        let spec = self.generator.clone().expect("clap requires one input");
        let grid = self.grid.unwrap_or_default();
        match build_corpus(&[spec], self.lambda, &grid, 0)?.pop() {
            Some(Member::Profile { f, .. }) => Ok(f),
            _ => Err(DunklError::Config("this generator has no spatial profile".into())),
        }
    }
}

fn main() -> ExitCode {
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let DunklError::Aggregate(all) = &e {
                for child in all.iter().skip(1) {
                    eprintln!("  {child}");
                }
            }
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("DUNKL_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        DunklError::Config(format!("DUNKL_THREADS must be a positive integer, got {v:?}"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| DunklError::Config(e.to_string()))
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Transform { input, out } => {
            let f = input.load()?;
            let g = dunkl_transform_radial(&f)?;
            std::fs::create_dir_all(&out)?;
            write_profile(&f, &out.join("spatial.csv"))?;
            write_profile(&g, &out.join("spectral.csv"))?;
            println!(
                "wrote {} and {}",
                out.join("spatial.csv").display(),
                out.join("spectral.csv").display()
            );
            println!("spectral tail decayed: {}", g.tail_flag());
        }
        Command::Modulus { input, m, delta, p } => {
            let f = input.load()?;
            println!("{}", Analysis::new(&f)?.modulus(m, delta, p)?);
        }
        Command::Besov { input, s, p, theta, r, method, depth } => {
            let f = input.load()?;
            let bp = BesovParams::new(s, p, theta, r.unwrap_or(s + 1.0))?.with_depth(depth)?;
            let a = Analysis::new(&f)?;
            let methods = method.map_or(BesovMethod::ALL.to_vec(), |m| vec![m]);
            for m in methods {
                let v = a.besov_norm(&bp, m, ApproximantChoice::NearBest)?;
                let flag = if v.surrogate { " (surrogate)" } else { "" };
                println!("{:<18} {:.10e}{flag}", m.name(), v.value);
            }
        }
        Command::Verify(v) => return verify(v),
        Command::Report { input, format, out } => {
            let report: Report = serde_json::from_reader(std::fs::File::open(&input)?)?;
            for f in format {
                for path in emit_report(&report, f, &out)? {
                    println!("wrote {}", path.display());
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(v: Verify) -> Result<ExitCode> {
    let mut cfg = match &v.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if !v.all {
        cfg.theorems.retain(|t| t.id.is_some_and(|id| v.theorem.contains(&id)));
        cfg.equivalences = None;
        for id in &v.theorem {
            if !cfg.theorems.iter().any(|t| t.id == Some(*id)) {
                return Err(DunklError::Config(format!("{id} is not configured")));
            }
        }
    }
    if !v.lambda.is_empty() {
        cfg.lambdas = v.lambda;
    }
    if let Some(g) = v.grid {
        cfg.grid = g;
    }
    if let Some(out) = v.out {
        cfg.out_dir = Some(out);
    }
    cfg.refine |= v.refine;
    let out = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("dunkl-report"));

    let report = dunkl::harness::run_experiment(&cfg)?;
    for f in [Format::Csv, Format::Json, Format::SvgLines] {
        emit_report(&report, f, &out)?;
    }
    print_summary(&report, &out);

    let violated: Vec<_> = report
        .summaries
        .iter()
        .filter(|s| {
            s.theorem == TheoremId::HausdorffYoung && s.max_ratio > 1.0 + CONSTANT_ONE_SLACK
        })
        .collect();
    if !violated.is_empty() {
        return Err(DunklError::Config(format!(
            "Hausdorff–Young constant exceeded: max ratio {}",
            violated[0].max_ratio
        )));
    }
    if report.unstable() {
        eprintln!("refinement instability: see the flagged rows above");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn print_summary(report: &Report, out: &Path) {
    println!(
        "{:<22} {:>6} {:>12} {:>12} {:>5} {:>5}",
        "theorem", "rows", "min", "max", "degen", "surr"
    );
    for s in &report.summaries {
        println!(
            "{:<22} {:>6} {:>12.4e} {:>12.4e} {:>5} {:>5}",
            s.theorem.to_string(),
            s.rows,
            s.min_ratio,
            s.max_ratio,
            s.degenerate,
            s.surrogate
        );
    }
    for b in &report.brackets {
        println!("{:<40} [{:.4e}, {:.4e}] over {}", b.name, b.min, b.max, b.samples);
    }
    let skipped: usize = report.skipped.iter().map(|s| s.cells).sum();
    if skipped > 0 {
        println!("{skipped} cells skipped as not applicable (listed in report.json)");
    }
    for d in report.refinement.iter().filter(|d| d.flagged) {
        println!(
            "FLAGGED {}: {:.4e} -> {:.4e} ({:.1}%)",
            d.quantity,
            d.base,
            d.refined,
            100.0 * d.rel_change
        );
    }
    println!("report written to {}", out.display());
}
