//! Sweep execution.

use rayon::prelude::*;

use crate::besov::{ApproximantChoice, BesovMethod, BesovParams};
use crate::error::{DunklError, Result};
use crate::harness::config::{EquivalenceSweep, ExperimentConfig};
use crate::harness::corpus::{build_corpus, Member};
use crate::harness::report::{EquivalenceSample, RefinementDelta, Report, SkippedCell};
use crate::inequalities::{eval_theorem, Cell, Evaluation, RatioSample, Subject, TheoremId};
use crate::smoothness::{Analysis, Mult};

/// Relative drift above which the refinement study flags a quantity.
pub const REFINEMENT_TOLERANCE: f64 = 0.10;

/// Lowest block in the Littlewood–Paley square function, relative to `−J`.
const SQUARE_FUNCTION_EXTRA_DEPTH: i32 = 10;

#[derive(Default)]
struct Outcome {
    rows: Vec<RatioSample>,
    skipped: Vec<SkippedCell>,
    equivalences: Vec<EquivalenceSample>,
    errors: Vec<DunklError>,
}

impl Outcome {
    fn merge(&mut self, other: Outcome) {
        self.rows.extend(other.rows);
        self.skipped.extend(other.skipped);
        self.equivalences.extend(other.equivalences);
        self.errors.extend(other.errors);
    }
}

type Sweeps = Vec<(TheoremId, Vec<Cell>)>;

/// Runs the configured sweep, and the refinement study when enabled.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = run_once(cfg)?;
    if cfg.refine {
        let refined = run_once(&cfg.refined())?;
        report.refinement = compare(&report, &refined);
    }
    Ok(report)
}

fn run_once(cfg: &ExperimentConfig) -> Result<Report> {
    let mut sweeps: Sweeps = Vec::new();
    for t in &cfg.theorems {
        sweeps.push((t.id()?, t.cells()?));
    }
    let mut all = Outcome::default();
    // one λ at a time keeps at most a few kernels alive
    for &lambda in &cfg.lambdas {
        let members = build_corpus(&cfg.corpus, lambda, &cfg.grid, cfg.seed)?;
        let parts: Vec<Outcome> = members.par_iter().map(|m| run_member(m, &sweeps, cfg)).collect();
        for p in parts {
            all.merge(p);
        }
    }
    if !all.errors.is_empty() {
        return Err(DunklError::Aggregate(all.errors));
    }
    Ok(Report::assemble(cfg.clone(), all.rows, all.skipped, all.equivalences))
}

fn tag(id: TheoremId, corpus: &str, cell: &Cell, e: DunklError) -> DunklError {
    DunklError::Sweep {
        theorem: id.to_string(),
        corpus: corpus.to_string(),
        cell: cell.to_string(),
        source: Box::new(e),
    }
}

/// Why `id` does not apply to `member`, if it does not.
fn not_applicable(member: &Member, id: TheoremId) -> Option<&'static str> {
    match (member, id) {
        (Member::Extremal { .. }, TheoremId::K1Sharpness) => None,
        (Member::Extremal { .. }, _) => {
            Some("spectral-only member: evaluated by K1_SHARPNESS only")
        }
        (Member::Profile { .. }, TheoremId::K1Sharpness) => {
            Some("K1_SHARPNESS is evaluated on the extremal family")
        }
        (Member::Profile { f, .. }, TheoremId::Bernstein) if f.band_limit().is_none() => {
            Some("BERNSTEIN needs a band-limited profile")
        }
        _ => None,
    }
}

fn run_member(member: &Member, sweeps: &Sweeps, cfg: &ExperimentConfig) -> Outcome {
    let mut out = Outcome::default();
    let mut tasks: Vec<(TheoremId, Cell)> = Vec::new();
    for (id, cells) in sweeps {
        if let Some(reason) = not_applicable(member, *id) {
            out.skipped.push(SkippedCell {
                theorem: *id,
                corpus_id: member.id().to_string(),
                cells: cells.len(),
                reason: reason.to_string(),
            });
            continue;
        }
        let mut too_large = 0;
        for c in cells {
            if let Member::Extremal { max_n, .. } = member {
                if c.n_or_delta.is_some_and(|n| n > *max_n as f64) {
                    too_large += 1;
                    continue;
                }
            }
            tasks.push((*id, *c));
        }
        if too_large > 0 {
            out.skipped.push(SkippedCell {
                theorem: *id,
                corpus_id: member.id().to_string(),
                cells: too_large,
                reason: "N exceeds the member's max_n".into(),
            });
        }
    }
    match member {
        Member::Extremal { id, params, eps, .. } => {
            for (tid, cell) in tasks {
                let subject = Subject::Extremal { lambda: params.lambda(), eps: *eps };
                match eval_theorem(subject, tid, &cell)
                    .and_then(|e| RatioSample::new(tid, id.clone(), cell, e))
                {
                    Ok(r) => out.rows.push(r),
                    Err(e) => out.errors.push(tag(tid, id, &cell, e)),
                }
            }
        }
        Member::Profile { id, f } => {
            let analysis = match Analysis::new(f) {
                Ok(a) => a,
                Err(e) => {
                    out.errors.push(DunklError::Sweep {
                        theorem: "transform".into(),
                        corpus: id.clone(),
                        cell: String::new(),
                        source: Box::new(e),
                    });
                    return out;
                }
            };
            let eq = cfg.equivalences.as_ref();
            // dry run to collect every multiplier norm, then one batched pass
            let (_, requests) = analysis.record(|a| {
                for (tid, cell) in &tasks {
                    let _ = eval_theorem(Subject::Profile(a), *tid, cell);
                }
                if let Some(eq) = eq {
                    let _ = equivalence_values(a, eq, cfg.depth, false);
                }
            });
            if let Err(e) = analysis.prefetch(&requests) {
                out.errors.push(DunklError::Sweep {
                    theorem: "prefetch".into(),
                    corpus: id.clone(),
                    cell: String::new(),
                    source: Box::new(e),
                });
                return out;
            }
            let results: Vec<Result<RatioSample>> = tasks
                .par_iter()
                .map(|(tid, cell)| {
                    eval_theorem(Subject::Profile(&analysis), *tid, cell)
                        .and_then(|e: Evaluation| RatioSample::new(*tid, id.clone(), *cell, e))
                        .map_err(|e| tag(*tid, id, cell, e))
                })
                .collect();
            for r in results {
                match r {
                    Ok(r) => out.rows.push(r),
                    Err(e) => out.errors.push(e),
                }
            }
            if let Some(eq) = eq {
                match equivalence_values(&analysis, eq, cfg.depth, true) {
                    Ok(v) => out.equivalences.extend(v.into_iter().map(|(name, params, value)| {
                        EquivalenceSample { name, corpus_id: id.clone(), params, value }
                    })),
                    Err(e) => out.errors.push(DunklError::Sweep {
                        theorem: "equivalences".into(),
                        corpus: id.clone(),
                        cell: String::new(),
                        source: Box::new(e),
                    }),
                }
            }
        }
    }
    out
}

/// Equivalence ratios for one analysed profile, as `(name, params, value)`.
pub fn equivalence_samples(
    a: &Analysis,
    eq: &EquivalenceSweep,
    depth: u32,
) -> Result<Vec<(String, String, f64)>> {
    let (_, requests) = a.record(|a| {
        let _ = equivalence_values(a, eq, depth, false);
    });
    a.prefetch(&requests)?;
    equivalence_values(a, eq, depth, true)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// With `square_function == false` the Littlewood–Paley entries (which do
/// not go through the memoized norms) are left out.
fn equivalence_values(
    a: &Analysis,
    eq: &EquivalenceSweep,
    depth: u32,
    square_function: bool,
) -> Result<Vec<(String, String, f64)>> {
    let mut out = Vec::new();
    a.prefetch_moduli(&eq.r, &eq.delta, &eq.p)?;
    for &p in &eq.p {
        for &r in &eq.r {
            for &d in &eq.delta {
                let params = format!("p={p},r={r},delta={d}");
                let omega = a.modulus(r, d, p)?;
                let diff = a.norm(Mult::Difference { t: d, m: r }, p)?;
                out.push(("MODULUS_VS_DIFFERENCE".to_string(), params.clone(), ratio(omega, diff)));
                let rstar = a.k_functional_realization(d, r, p)?;
                out.push(("REALIZATION_VS_MODULUS".to_string(), params, ratio(rstar, omega)));
            }
        }
    }
    for &p in eq.p.iter().filter(|p| **p > 1.0) {
        for &s in &eq.besov_s {
            for &theta in &eq.besov_theta {
                let params = format!("p={p},s={s},theta={theta}");
                let bp = BesovParams::new(s, p, theta, s + 1.0)?.with_depth(depth)?;
                let def =
                    a.besov_norm(&bp, BesovMethod::Definition, ApproximantChoice::NearBest)?.value;
                for m in BesovMethod::ALL.into_iter().filter(|m| *m != BesovMethod::Definition) {
                    let v = a.besov_norm(&bp, m, ApproximantChoice::NearBest)?.value;
                    out.push((
                        format!("BESOV_{}_VS_DEFINITION", m.name()),
                        params.clone(),
                        ratio(v, def),
                    ));
                }
                let vp = a
                    .besov_norm(
                        &bp,
                        BesovMethod::LaplacianApprox,
                        ApproximantChoice::ValleePoussin,
                    )?
                    .value;
                out.push((
                    "BESOV_LAPLACIAN_APPROX_VP_VS_DEFINITION".into(),
                    params.clone(),
                    ratio(vp, def),
                ));
                let bp2 = BesovParams { r: s + 2.0, ..bp };
                let def2 =
                    a.besov_norm(&bp2, BesovMethod::Definition, ApproximantChoice::NearBest)?.value;
                out.push(("BESOV_R_INDEPENDENCE".into(), params, ratio(def2, def)));
            }
        }
    }
    let laplacians: Vec<Mult> = eq.lp_r.iter().map(|&r| Mult::Laplacian { r }).collect();
    let lap = a.norms(&laplacians, &eq.p)?;
    if square_function {
        let lowest = -(depth as i32) - SQUARE_FUNCTION_EXTRA_DEPTH;
        let sq = a.square_function_norms(&eq.lp_r, &eq.p, lowest)?;
        for (i, &r) in eq.lp_r.iter().enumerate() {
            for (k, &p) in eq.p.iter().enumerate() {
                out.push((
                    "LITTLEWOOD_PALEY".into(),
                    format!("p={p},r={r}"),
                    ratio(sq[i][k], lap[i][k]),
                ));
            }
        }
    }
    Ok(out)
}

fn rel_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn delta(quantity: String, base: f64, refined: f64) -> RefinementDelta {
    let rel = rel_change(base, refined);
    RefinementDelta {
        quantity,
        base,
        refined,
        rel_change: rel,
        flagged: rel >= REFINEMENT_TOLERANCE,
    }
}

/// Summary max-ratios and bracket ends compared between two runs.
fn compare(base: &Report, refined: &Report) -> Vec<RefinementDelta> {
    let mut out = Vec::new();
    for s in &base.summaries {
        if let Some(t) = refined.summary(s.theorem) {
            out.push(delta(format!("{}:max_ratio", s.theorem), s.max_ratio, t.max_ratio));
        }
    }
    for b in &base.brackets {
        if let Some(t) = refined.bracket(&b.name) {
            out.push(delta(format!("{}:min", b.name), b.min, t.min));
            out.push(delta(format!("{}:max", b.name), b.max, t.max));
        }
    }
    out
}
