//! Experiment configuration: a single JSON document.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::besov::{ApproximantChoice, DEFAULT_DEPTH};
use crate::error::{DunklError, Result};
use crate::inequalities::{conjugate, Cell, Side, TheoremId};
use crate::measure::{make_grid, RadialGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub radius: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { radius: 40.0, panels: 64, nodes_per_panel: 64 }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<RadialGrid> {
        make_grid(self.radius, self.panels, self.nodes_per_panel)
    }

    /// Same radius with twice the panels.
    pub fn doubled(&self) -> Self {
        Self { panels: 2 * self.panels, ..*self }
    }

    /// Parses `R,panels,nodes`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || DunklError::Config(format!("grid must be R,panels,nodes; got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(Self {
            radius: parts[0].parse().map_err(|_| bad())?,
            panels: parts[1].parse().map_err(|_| bad())?,
            nodes_per_panel: parts[2].parse().map_err(|_| bad())?,
        })
    }
}

/// A named corpus generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// `e^{-a r²}`.
    Gaussian { scale: f64 },
    /// `e^{-r⁴}`.
    SuperGaussian,
    /// `e^{-r}`.
    Stretched,
    /// Inverse transform of a smooth bump supported in `[σ/2, σ]`.
    BandlimitedBump { sigma: f64 },
    /// `Σ c_i e^{-a_i r²}` with seeded random `c_i ∈ [−1, 1]`, `a_i ∈ [1/4, 2]`.
    GaussianMixture { terms: usize },
    /// The spectral-window family; `max_n` bounds the `N` it is used with.
    Extremal { eps: f64, max_n: usize },
}

/// How `q` is derived from `p` when not listed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QRule {
    /// `{p, (p+p')/2, 2, p'}`, keeping the admissible ones.
    Pitt,
}

/// A theorem with the Cartesian grid of its parameters. Empty lists mean
/// the parameter is absent.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremSweep {
    pub id: Option<TheoremId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub q: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_rule: Option<QRule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub r: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<f64>,
    /// `m = r + m_offset`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_or_delta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub approximant: Vec<ApproximantChoice>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub side: Vec<Side>,
}

fn or_none<T: Copy>(v: &[T]) -> Vec<Option<T>> {
    if v.is_empty() {
        vec![None]
    } else {
        v.iter().copied().map(Some).collect()
    }
}

impl TheoremSweep {
    pub fn id(&self) -> Result<TheoremId> {
        self.id.ok_or_else(|| DunklError::Config("theorem sweep without id".into()))
    }

    /// Expands the grid into cells. Cells with the wrong parameter set are a
    /// configuration error; cells outside the theorem's range are dropped.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let id = self.id()?;
        if self.m_offset.is_some() && !self.m.is_empty() {
            return Err(DunklError::Config(format!("{id}: give either m or m_offset, not both")));
        }
        if self.q_rule.is_some() && !self.q.is_empty() {
            return Err(DunklError::Config(format!("{id}: give either q or q_rule, not both")));
        }
        let mut out = Vec::new();
        for p in or_none(&self.p) {
            let qs: Vec<Option<f64>> = match (self.q_rule, p) {
                (Some(QRule::Pitt), Some(p)) => {
                    let pc = conjugate(p);
                    let mut v: Vec<f64> = vec![p, 0.5 * (p + pc), 2.0, pc];
                    v.retain(|q| q.is_finite());
                    v.sort_by(f64::total_cmp);
                    v.dedup();
                    v.into_iter().map(Some).collect()
                }
                (Some(QRule::Pitt), None) => {
                    return Err(DunklError::Config(format!("{id}: q_rule needs p")));
                }
                (None, _) => or_none(&self.q),
            };
            for q in &qs {
                for r in or_none(&self.r) {
                    let ms = match (self.m_offset, r) {
                        (Some(off), Some(r)) => vec![Some(r + off)],
                        (Some(_), None) => {
                            return Err(DunklError::Config(format!("{id}: m_offset needs r")))
                        }
                        (None, _) => or_none(&self.m),
                    };
                    for m in &ms {
                        for s in or_none(&self.s) {
                            for n in or_none(&self.n_or_delta) {
                                for approximant in or_none(&self.approximant) {
                                    for side in or_none(&self.side) {
                                        let cell = Cell {
                                            p,
                                            q: *q,
                                            r,
                                            m: *m,
                                            s,
                                            n_or_delta: n,
                                            approximant,
                                            side,
                                        };
                                        cell.check_fields(id)
                                            .map_err(|e| DunklError::Config(e.to_string()))?;
                                        if cell.check_range(id).is_ok() {
                                            out.push(cell);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Parameters of the equivalence-bracket sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceSweep {
    pub p: Vec<f64>,
    /// Modulus / realization orders.
    pub r: Vec<f64>,
    /// `δ` values for the modulus brackets.
    pub delta: Vec<f64>,
    /// Besov smoothness values; `r = s + 1` and `s + 2`.
    pub besov_s: Vec<f64>,
    #[serde(with = "crate::serde_inf::list")]
    pub besov_theta: Vec<f64>,
    /// Orders of the Littlewood–Paley square function.
    pub lp_r: Vec<f64>,
}

impl Default for EquivalenceSweep {
    fn default() -> Self {
        Self {
            p: vec![1.5, 2.0, 3.0],
            r: vec![0.5, 1.0, 2.0],
            delta: (0..=8).map(|i| f64::powi(2.0, -i)).collect(),
            besov_s: vec![0.5, 1.0],
            besov_theta: vec![1.0, 2.0, f64::INFINITY],
            lp_r: vec![0.5, 1.0, 2.0],
        }
    }
}

fn default_lambdas() -> Vec<f64> {
    vec![0.2, 0.7, 1.5, 3.0]
}

fn default_depth() -> u32 {
    DEFAULT_DEPTH
}

fn default_equivalences() -> Option<EquivalenceSweep> {
    Some(EquivalenceSweep::default())
}

/// The standard corpus.
pub fn default_corpus() -> Vec<GeneratorSpec> {
    vec![
        GeneratorSpec::Gaussian { scale: 0.5 },
        GeneratorSpec::Gaussian { scale: 2.0 },
        GeneratorSpec::SuperGaussian,
        GeneratorSpec::Stretched,
        GeneratorSpec::BandlimitedBump { sigma: 1.0 },
        GeneratorSpec::BandlimitedBump { sigma: 4.0 },
        GeneratorSpec::Extremal { eps: 0.1, max_n: 64 },
    ]
}

fn sweep(id: TheoremId) -> TheoremSweep {
    TheoremSweep { id: Some(id), ..Default::default() }
}

/// The standard theorem sweeps.
pub fn default_theorems() -> Vec<TheoremSweep> {
    use TheoremId::*;
    let ps = vec![1.5, 2.0, 3.0];
    let rs = vec![0.5, 1.0, 2.0];
    let ns = vec![2.0, 4.0, 8.0, 16.0, 32.0];
    let deltas: Vec<f64> = (-3..=1).map(|i| f64::powi(2.0, i)).collect();
    let sharp =
        |id| TheoremSweep { p: ps.clone(), r: rs.clone(), n_or_delta: ns.clone(), ..sweep(id) };
    vec![
        TheoremSweep {
            p: ps.clone(),
            r: rs.clone(),
            n_or_delta: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
            ..sweep(Jackson11)
        },
        sharp(Inverse12),
        sharp(SharpJackson14),
        sharp(SharpInverse16),
        TheoremSweep { m_offset: Some(1.0), ..sharp(ReverseMarchaud15) },
        TheoremSweep { m_offset: Some(1.0), ..sharp(SharpMarchaud17) },
        TheoremSweep {
            approximant: vec![ApproximantChoice::NearBest, ApproximantChoice::ValleePoussin],
            side: vec![Side::Lower, Side::Upper],
            ..sharp(ApproximantSmooth18)
        },
        TheoremSweep {
            p: vec![1.25, 1.5, 2.0, 3.0, 4.0],
            q_rule: Some(QRule::Pitt),
            r: rs.clone(),
            n_or_delta: deltas.clone(),
            ..sweep(ModulusPittT5)
        },
        TheoremSweep {
            p: vec![1.25, 1.5, 2.0, 3.0, 4.0],
            r: rs.clone(),
            n_or_delta: deltas.clone(),
            ..sweep(ModulusKelloggT5)
        },
        TheoremSweep { p: vec![1.25, 1.5, 2.0], q_rule: Some(QRule::Pitt), ..sweep(Pitt1) },
        TheoremSweep { p: vec![2.0, 3.0, 4.0], q_rule: Some(QRule::Pitt), ..sweep(Pitt2) },
        TheoremSweep { p: vec![1.25, 1.5, 2.0], ..sweep(Kellogg1) },
        TheoremSweep { p: vec![1.25, 1.5, 2.0], q_rule: Some(QRule::Pitt), ..sweep(Kellogg1) },
        TheoremSweep { p: vec![2.0, 3.0, 4.0], ..sweep(Kellogg2) },
        TheoremSweep { p: vec![1.0, 1.25, 1.5, 2.0], ..sweep(HausdorffYoung) },
        TheoremSweep { p: vec![1.25, 1.5, 2.0], ..sweep(HardyLittlewood) },
        TheoremSweep { p: ps.clone(), r: rs.clone(), ..sweep(Bernstein) },
        TheoremSweep { p: vec![1.0], r: vec![1.0, 2.0], n_or_delta: deltas, ..sweep(LebesgueL1) },
        TheoremSweep { p: vec![2.0], s: vec![0.5, 1.0], ..sweep(TitchmarshP2) },
        TheoremSweep {
            p: vec![1.5],
            n_or_delta: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            ..sweep(K1Sharpness)
        },
        TheoremSweep {
            p: vec![1.5],
            q_rule: Some(QRule::Pitt),
            n_or_delta: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            ..sweep(K1Sharpness)
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub grid: GridSpec,
    /// Dyadic truncation depth `J`.
    #[serde(default = "default_depth")]
    pub depth: u32,
    /// Seed for randomized corpus parameters.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_corpus")]
    pub corpus: Vec<GeneratorSpec>,
    #[serde(default = "default_theorems")]
    pub theorems: Vec<TheoremSweep>,
    #[serde(default = "default_equivalences")]
    pub equivalences: Option<EquivalenceSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    /// Re-run on the doubled grid with doubled depth and report the drift.
    #[serde(default)]
    pub refine: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            lambdas: default_lambdas(),
            grid: GridSpec::default(),
            depth: DEFAULT_DEPTH,
            seed: 0,
            corpus: default_corpus(),
            theorems: default_theorems(),
            equivalences: default_equivalences(),
            out_dir: None,
            refine: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| DunklError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        for &l in &self.lambdas {
            if !(l.is_finite() && l > -0.5) {
                return Err(DunklError::Config(format!("λ_k must exceed −1/2, got {l}")));
            }
        }
        self.grid.build().map_err(|e| DunklError::Config(e.to_string()))?;
        if self.depth == 0 {
            return Err(DunklError::Config("depth must be at least 1".into()));
        }
        for g in &self.corpus {
            let ok = match g {
                GeneratorSpec::Gaussian { scale } => scale.is_finite() && *scale > 0.0,
                GeneratorSpec::BandlimitedBump { sigma } => sigma.is_finite() && *sigma > 0.0,
                GeneratorSpec::GaussianMixture { terms } => *terms >= 1,
                GeneratorSpec::Extremal { eps, max_n } => *eps > 0.0 && *eps < 1.0 && *max_n >= 1,
                GeneratorSpec::SuperGaussian | GeneratorSpec::Stretched => true,
            };
            if !ok {
                return Err(DunklError::Config(format!("invalid generator parameters: {g:?}")));
            }
        }
        for t in &self.theorems {
            t.cells()?;
        }
        if let Some(eq) = &self.equivalences {
            let bad = eq.p.iter().any(|p| !(p.is_finite() && *p >= 1.0))
                || eq
                    .r
                    .iter()
                    .chain(&eq.delta)
                    .chain(&eq.besov_s)
                    .chain(&eq.lp_r)
                    .any(|x| !(x.is_finite() && *x > 0.0))
                || eq.besov_theta.iter().any(|t| t.is_nan() || *t <= 0.0);
            if bad {
                return Err(DunklError::Config("invalid equivalence sweep parameters".into()));
            }
        }
        Ok(())
    }

    /// The configuration used for the refinement run.
    pub fn refined(&self) -> Self {
        Self { grid: self.grid.doubled(), depth: 2 * self.depth, refine: false, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_expand() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&json).unwrap(), cfg);
    }

    #[test]
    fn pitt_rule_keeps_admissible_q() {
        let t =
            TheoremSweep { p: vec![1.5], q_rule: Some(QRule::Pitt), ..sweep(TheoremId::Kellogg1) };
        let qs: Vec<f64> = t.cells().unwrap().iter().map(|c| c.q.unwrap()).collect();
        assert_eq!(qs, vec![2.0, 2.25, 3.0]);
    }

    #[test]
    fn wrong_fields_are_config_errors() {
        let t = TheoremSweep { p: vec![1.5], r: vec![1.0], ..sweep(TheoremId::HausdorffYoung) };
        assert!(matches!(t.cells(), Err(DunklError::Config(_))));
    }
}
