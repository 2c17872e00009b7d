//! Besov norms through the modulus definition and its dyadic
//! characterizations, plus the Lipschitz (`θ = ∞`) norm.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::measure::RadialProfile;
use crate::smoothness::{Analysis, Mult};

/// Default dyadic truncation depth.
pub const DEFAULT_DEPTH: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    /// Summation exponent; `f64::INFINITY` gives the sup form.
    pub theta: f64,
    /// Modulus order.
    pub r: f64,
    /// Dyadic levels `0..=J` (homogeneous sums use `−J..=J`).
    pub depth: u32,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, theta: f64, r: f64) -> Result<Self> {
        let bp = Self { s, p, theta, r, depth: DEFAULT_DEPTH };
        bp.validate()?;
        Ok(bp)
    }

    pub fn with_depth(mut self, depth: u32) -> Result<Self> {
        self.depth = depth;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s.is_finite() && self.s > 0.0) {
            return Err(invalid(format!("smoothness s must be positive, got {}", self.s)));
        }
        if !(self.p.is_finite() && self.p > 1.0) {
            return Err(invalid(format!("Besov exponent p must lie in (1, ∞), got {}", self.p)));
        }
        if self.theta.is_nan() || self.theta <= 0.0 {
            return Err(invalid(format!("θ must be positive, got {}", self.theta)));
        }
        let ok_r = if self.theta.is_infinite() { self.r >= self.s } else { self.r > self.s };
        if !(self.r.is_finite() && ok_r) {
            return Err(invalid(format!(
                "modulus order r = {} is too small for s = {}",
                self.r, self.s
            )));
        }
        if self.depth == 0 {
            return Err(invalid("truncation depth must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BesovMethod {
    /// `(∫_0^1 (t^{-s} ω_r(f,t))^θ dt/t)^{1/θ}` as a quarter-dyadic sum.
    Definition,
    /// `Σ_{j≥0} 2^{sθj} ω_r(f, 2^{-j})^θ`.
    DyadicModulus,
    /// `Σ_{j≥0} 2^{sθj} E_{2^j}(f)^θ`.
    BestApprox,
    /// `Σ_{j≥1} 2^{sθj} ‖f − η_j f‖^θ`.
    VpTail,
    /// `Σ_{j≥1} 2^{sθj} ‖θ_j f‖^θ`.
    DyadicBlock,
    /// `Σ_{j∈Z} 2^{sθj} ‖θ_j f‖^θ`.
    HomogeneousBlock,
    /// `Σ_{j≥1} 2^{(s−r)θj} ‖(−Δ)^{r/2} P_j f‖^θ`.
    LaplacianApprox,
}

impl BesovMethod {
    pub const ALL: [BesovMethod; 7] = [
        BesovMethod::Definition,
        BesovMethod::DyadicModulus,
        BesovMethod::BestApprox,
        BesovMethod::VpTail,
        BesovMethod::DyadicBlock,
        BesovMethod::HomogeneousBlock,
        BesovMethod::LaplacianApprox,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BesovMethod::Definition => "DEFINITION",
            BesovMethod::DyadicModulus => "DYADIC_MODULUS",
            BesovMethod::BestApprox => "BEST_APPROX",
            BesovMethod::VpTail => "VP_TAIL",
            BesovMethod::DyadicBlock => "DYADIC_BLOCK",
            BesovMethod::HomogeneousBlock => "HOMOGENEOUS_BLOCK",
            BesovMethod::LaplacianApprox => "LAPLACIAN_APPROX",
        }
    }
}

impl std::str::FromStr for BesovMethod {
    type Err = crate::DunklError;

    fn from_str(s: &str) -> Result<Self> {
        BesovMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown Besov method {s:?}")))
    }
}

/// Which approximants `P_j f` enter the Laplacian characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproximantChoice {
    /// Best approximants: exact spectral truncation at `p = 2`, `η_j f` otherwise.
    #[default]
    NearBest,
    /// `η_j f`.
    ValleePoussin,
}

impl ApproximantChoice {
    /// The multiplier for `(−Δ)^{r/2} P_j f`, and whether it is a surrogate
    /// for the best approximant.
    pub fn laplacian(self, r: f64, j: i32, p: f64) -> (Mult, bool) {
        let sigma = f64::powi(2.0, j);
        match self {
            ApproximantChoice::NearBest if p == 2.0 => (Mult::LaplacianHard { r, sigma }, false),
            ApproximantChoice::NearBest => (Mult::LaplacianSmooth { r, sigma }, true),
            ApproximantChoice::ValleePoussin => (Mult::LaplacianSmooth { r, sigma }, false),
        }
    }
}

/// `(Σ x^θ)^{1/θ}`, or the max for `θ = ∞`.
pub(crate) fn lq_sum(terms: impl IntoIterator<Item = f64>, theta: f64) -> f64 {
    if theta.is_infinite() {
        terms.into_iter().fold(0.0, f64::max)
    } else {
        terms.into_iter().map(|x| x.powf(theta)).sum::<f64>().powf(1.0 / theta)
    }
}

/// A Besov norm value and whether it used the `p ≠ 2` approximation surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovValue {
    pub value: f64,
    pub surrogate: bool,
}

impl Analysis {
    pub fn besov_norm(
        &self,
        bp: &BesovParams,
        method: BesovMethod,
        choice: ApproximantChoice,
    ) -> Result<BesovValue> {
        bp.validate()?;
        let (s, p, th, r) = (bp.s, bp.p, bp.theta, bp.r);
        let depth = bp.depth as i32;
        let base = self.lp_norm(p)?;
        let weighted = |j: i32, x: f64| f64::powf(2.0, s * j as f64) * x;
        let mut surrogate = false;
        let tail = match method {
            BesovMethod::Definition => {
                // t_i = 2^{-i/4}; each term carries the dt/t mass ln2/4
                let steps = 4 * depth;
                let ts: Vec<f64> = (0..=steps).map(|i| f64::powf(2.0, -(i as f64) / 4.0)).collect();
                self.prefetch_moduli(&[r], &ts, &[p])?;
                let mut terms = Vec::with_capacity(ts.len());
                for t in &ts {
                    terms.push(t.powf(-s) * self.modulus(r, *t, p)?);
                }
                if th.is_infinite() {
                    lq_sum(terms, th)
                } else {
                    let mass = std::f64::consts::LN_2 / 4.0;
                    lq_sum(terms.into_iter().map(|x| x * mass.powf(1.0 / th)), th)
                }
            }
            BesovMethod::DyadicModulus => {
                let ds: Vec<f64> = (0..=depth).map(|j| f64::powi(2.0, -j)).collect();
                self.prefetch_moduli(&[r], &ds, &[p])?;
                let mut terms = Vec::new();
                for j in 0..=depth {
                    terms.push(weighted(j, self.modulus(r, ds[j as usize], p)?));
                }
                lq_sum(terms, th)
            }
            BesovMethod::BestApprox => {
                surrogate = p != 2.0;
                let mut terms = Vec::new();
                for j in 0..=depth {
                    terms.push(weighted(j, self.approximation_error(f64::powi(2.0, j), p)?.0));
                }
                lq_sum(terms, th)
            }
            BesovMethod::VpTail => {
                let mults: Vec<Mult> =
                    (1..=depth).map(|j| Mult::Residual { sigma: f64::powi(2.0, j) }).collect();
                let v = self.norms(&mults, &[p])?;
                lq_sum((1..=depth).zip(v).map(|(j, x)| weighted(j, x[0])), th)
            }
            BesovMethod::DyadicBlock => {
                let mults: Vec<Mult> = (1..=depth).map(|j| Mult::Block { j }).collect();
                let v = self.norms(&mults, &[p])?;
                lq_sum((1..=depth).zip(v).map(|(j, x)| weighted(j, x[0])), th)
            }
            BesovMethod::HomogeneousBlock => {
                let mults: Vec<Mult> = (-depth..=depth).map(|j| Mult::Block { j }).collect();
                let v = self.norms(&mults, &[p])?;
                lq_sum((-depth..=depth).zip(v).map(|(j, x)| weighted(j, x[0])), th)
            }
            BesovMethod::LaplacianApprox => {
                let mut mults = Vec::new();
                for j in 1..=depth {
                    let (m, sur) = choice.laplacian(r, j, p);
                    surrogate |= sur;
                    mults.push(m);
                }
                let v = self.norms(&mults, &[p])?;
                lq_sum(
                    (1..=depth).zip(v).map(|(j, x)| f64::powf(2.0, (s - r) * j as f64) * x[0]),
                    th,
                )
            }
        };
        Ok(BesovValue { value: base + tail, surrogate })
    }

    /// `‖f‖_p + sup_t t^{-s} ω_{s+1}(f, t)_p` over `t = 2^{-i/4}`, `i = 0..4J`.
    pub fn lipschitz_norm(&self, s: f64, p: f64, depth: u32) -> Result<f64> {
        if !(s.is_finite() && s > 0.0) {
            return Err(invalid(format!("smoothness s must be positive, got {s}")));
        }
        let r = s + 1.0;
        let ts: Vec<f64> = (0..=4 * depth).map(|i| f64::powf(2.0, -(i as f64) / 4.0)).collect();
        self.prefetch_moduli(&[r], &ts, &[p])?;
        let mut sup: f64 = 0.0;
        for t in &ts {
            sup = sup.max(t.powf(-s) * self.modulus(r, *t, p)?);
        }
        Ok(self.lp_norm(p)? + sup)
    }
}

/// Besov norm of `f` by the chosen characterization.
pub fn besov_norm(f: &RadialProfile, bp: &BesovParams, method: BesovMethod) -> Result<f64> {
    Ok(Analysis::new(f)?.besov_norm(bp, method, ApproximantChoice::NearBest)?.value)
}

/// Lipschitz (`θ = ∞`) norm with `r = s + 1`.
pub fn lipschitz_norm(f: &RadialProfile, s: f64, p: f64) -> Result<f64> {
    Analysis::new(f)?.lipschitz_norm(s, p, DEFAULT_DEPTH)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{make_grid, WeightParams};
    use std::sync::Arc;

    #[test]
    fn parameter_rules() {
        assert!(BesovParams::new(1.0, 2.0, 2.0, 1.0).is_err());
        assert!(BesovParams::new(1.0, 2.0, f64::INFINITY, 1.0).is_ok());
        assert!(BesovParams::new(1.0, 1.0, 2.0, 2.0).is_err());
        assert_eq!("vp_tail".parse::<BesovMethod>().unwrap(), BesovMethod::VpTail);
    }

    #[test]
    fn gaussian_norms_are_finite_and_comparable() {
        let grid = Arc::new(make_grid(40.0, 64, 64).unwrap());
        let f =
            RadialProfile::from_fn(WeightParams::new(0.7).unwrap(), grid, |r| (-0.5 * r * r).exp())
                .unwrap();
        let a = Analysis::new(&f).unwrap();
        let bp = BesovParams::new(1.0, 2.0, 2.0, 2.0).unwrap();
        let vals: Vec<f64> = BesovMethod::ALL
            .iter()
            .map(|m| a.besov_norm(&bp, *m, ApproximantChoice::NearBest).unwrap().value)
            .collect();
        let (lo, hi) = vals.iter().fold((f64::MAX, 0.0_f64), |(l, h), v| (l.min(*v), h.max(*v)));
        assert!(lo > 0.0 && hi.is_finite());
        assert!(hi / lo < 20.0, "{vals:?}");
    }
}
