//! Moduli of smoothness, best and near-best band-limited approximation, and
//! the realization of the K-functional.
//!
//! Everything here is a norm of `F^{-1}(m · F f)` for some multiplier `m`.
//! [`Analysis`] keeps the transform of one profile and memoizes those norms,
//! batching the inverse transforms of all missing multipliers into a single
//! matrix product. Norms at `p = 2` are taken on the spectral side
//! (Plancherel); other exponents go through the spatial samples on `[0, R]`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::measure::{lp_with_weights, Profile, RadialProfile};
use crate::multipliers::{difference_symbol, lp_cut, smooth_cutoff, theta, SpectralView};
use crate::specfun::NormalizedBessel;

/// Number of points `δ·2^{-i/4}`, `i = 0..16`, in the sup defining `ω`.
pub const MODULUS_STEPS: usize = 17;

/// Largest number of inverse transforms batched into one matrix product.
const BATCH: usize = 96;

/// A spectral multiplier whose output norm is memoized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mult {
    /// `1`: the profile itself.
    Identity,
    /// `(1 − j_λ(ts))^{m/2}`: the difference `Δ_t^m f`.
    Difference { t: f64, m: f64 },
    /// `j_λ(ts)`: the translation `T^t f`.
    Translation { t: f64 },
    /// `1 − η(s/σ)`: the residual `f − η(·/σ) f`.
    Residual { sigma: f64 },
    /// `χ_{[σ,∞)}(s)`: the residual of the L² best approximation.
    HardResidual { sigma: f64 },
    /// `s^r η(s/σ)`: `(−Δ)^{r/2}` of the smooth approximant.
    LaplacianSmooth { r: f64, sigma: f64 },
    /// `s^r χ_{[0,σ]}(s)`: `(−Δ)^{r/2}` of the L² best approximant.
    LaplacianHard { r: f64, sigma: f64 },
    /// `s^r`.
    Laplacian { r: f64 },
    /// `θ_j(s)`.
    Block { j: i32 },
    /// `s^r η_0(s)`: `(−Δ)^{r/2} η_0 f`.
    LaplacianLow { r: f64 },
}

impl Mult {
    fn key(&self) -> (u8, u64, u64) {
        match *self {
            Mult::Identity => (0, 0, 0),
            Mult::Difference { t, m } => (1, t.to_bits(), m.to_bits()),
            Mult::Translation { t } => (2, t.to_bits(), 0),
            Mult::Residual { sigma } => (3, sigma.to_bits(), 0),
            Mult::HardResidual { sigma } => (4, sigma.to_bits(), 0),
            Mult::LaplacianSmooth { r, sigma } => (5, r.to_bits(), sigma.to_bits()),
            Mult::LaplacianHard { r, sigma } => (6, r.to_bits(), sigma.to_bits()),
            Mult::Laplacian { r } => (7, r.to_bits(), 0),
            Mult::Block { j } => (8, j as u64, 0),
            Mult::LaplacianLow { r } => (9, r.to_bits(), 0),
        }
    }
}

/// Pointwise values and quadrature factors of a multiplier on a spectral
/// grid. Cut panels put the exact-cut quadrature into `cut` (a linear
/// factor on the quadrature weights) rather than into `values`.
struct Realized {
    values: Vec<f64>,
    cut: Option<Vec<f64>>,
}

/// A multiplier's key with the bit pattern of `p`.
type NormKey = ((u8, u64, u64), u64);

/// The memoizing norm engine for one profile.
#[derive(Debug)]
pub struct Analysis {
    view: SpectralView,
    norms: Mutex<HashMap<NormKey, f64>>,
    recording: Mutex<Option<Vec<(Mult, f64)>>>,
}

impl Analysis {
    pub fn new(f: &RadialProfile) -> Result<Self> {
        Ok(Self::from_view(SpectralView::new(f)?))
    }

    pub fn from_view(view: SpectralView) -> Self {
        Self { view, norms: Mutex::new(HashMap::new()), recording: Mutex::new(None) }
    }

    pub fn view(&self) -> &SpectralView {
        &self.view
    }

    pub fn profile(&self) -> &RadialProfile {
        self.view.profile()
    }

    pub fn lambda(&self) -> f64 {
        self.view.lambda()
    }

    fn realize(&self, m: &Mult) -> Realized {
        let s = self.view.frequencies();
        let grid = self.view.spectrum().grid();
        let lambda = self.lambda();
        let plain = |values: Vec<f64>| Realized { values, cut: None };
        match *m {
            Mult::Identity => plain(vec![1.0; s.len()]),
            Mult::Difference { t, m } => plain(difference_symbol(lambda, t, m, s)),
            Mult::Translation { t } => {
                let b = NormalizedBessel::new(lambda);
                plain(s.iter().map(|x| b.eval(t * x)).collect())
            }
            Mult::Residual { sigma } => {
                plain(s.iter().map(|x| 1.0 - smooth_cutoff(x / sigma)).collect())
            }
            Mult::LaplacianSmooth { r, sigma } => {
                plain(s.iter().map(|x| x.powf(r) * smooth_cutoff(x / sigma)).collect())
            }
            Mult::Laplacian { r } => plain(s.iter().map(|x| x.powf(r)).collect()),
            Mult::Block { j } => plain(s.iter().map(|x| theta(j, *x)).collect()),
            Mult::LaplacianLow { r } => {
                plain(s.iter().map(|x| x.powf(r) * smooth_cutoff(*x)).collect())
            }
            Mult::HardResidual { sigma } => Realized {
                values: vec![1.0; s.len()],
                cut: Some(cut_factors(grid.interval_weights(sigma, f64::INFINITY), grid.weights())),
            },
            Mult::LaplacianHard { r, sigma } => Realized {
                values: s.iter().map(|x| x.powf(r)).collect(),
                cut: Some(cut_factors(grid.interval_weights(0.0, sigma), grid.weights())),
            },
        }
    }

    /// `‖F^{-1}(m F f)‖_p` for every multiplier and exponent, indexed
    /// `[multiplier][exponent]`. Missing entries are computed in batches.
    pub fn norms(&self, mults: &[Mult], ps: &[f64]) -> Result<Vec<Vec<f64>>> {
        for &p in ps {
            if p.is_nan() || p < 1.0 {
                return Err(invalid(format!("norm exponent must satisfy p ≥ 1, got {p}")));
            }
        }
        if let Some(log) = self.recording.lock().expect("recording poisoned").as_mut() {
            for m in mults {
                log.extend(ps.iter().map(|p| (*m, *p)));
            }
            return Ok(vec![vec![1.0; ps.len()]; mults.len()]);
        }
        let mut spatial_missing: Vec<Mult> = Vec::new();
        {
            let cache = self.norms.lock().expect("norm cache poisoned");
            for m in mults {
                let needs =
                    ps.iter().any(|p| *p != 2.0 && !cache.contains_key(&(m.key(), p.to_bits())));
                if needs && !spatial_missing.iter().any(|x| x.key() == m.key()) {
                    spatial_missing.push(*m);
                }
            }
        }
        let spatial_ps: Vec<f64> = ps.iter().copied().filter(|p| *p != 2.0).collect();
        let mut fresh: Vec<(NormKey, f64)> = Vec::new();
        if !spatial_missing.is_empty() {
            let batches: Vec<Vec<(NormKey, f64)>> = spatial_missing
                .par_chunks(BATCH)
                .map(|chunk| {
                    let mut out = Vec::new();
                    let realized: Vec<Vec<f64>> = chunk
                        .iter()
                        .map(|m| {
                            let r = self.realize(m);
                            match r.cut {
                                Some(c) => r.values.iter().zip(&c).map(|(a, b)| a * b).collect(),
                                None => r.values,
                            }
                        })
                        .collect();
                    let cols = self.view.apply_many(&realized);
                    let norms = self.view.column_norms(&cols, &spatial_ps);
                    for (m, row) in chunk.iter().zip(norms) {
                        for (p, v) in spatial_ps.iter().zip(row) {
                            out.push(((m.key(), p.to_bits()), v));
                        }
                    }
                    out
                })
                .collect();
            fresh.extend(batches.into_iter().flatten());
        }
        if ps.contains(&2.0) {
            let cache = self.norms.lock().expect("norm cache poisoned");
            let todo: Vec<Mult> = mults
                .iter()
                .copied()
                .filter(|m| !cache.contains_key(&(m.key(), 2f64.to_bits())))
                .collect();
            drop(cache);
            for m in todo {
                let v = self.spectral_l2(&m);
                fresh.push(((m.key(), 2f64.to_bits()), v));
            }
        }
        let mut cache = self.norms.lock().expect("norm cache poisoned");
        cache.extend(fresh);
        Ok(mults
            .iter()
            .map(|m| ps.iter().map(|p| cache[&(m.key(), p.to_bits())]).collect())
            .collect())
    }

    /// Runs `work` without computing any multiplier norm, returning the
    /// norms it asked for. Results produced inside `work` are placeholders.
    pub fn record<R>(&self, work: impl FnOnce(&Analysis) -> R) -> (R, Vec<(Mult, f64)>) {
        *self.recording.lock().expect("recording poisoned") = Some(Vec::new());
        let out = work(self);
        let log = self.recording.lock().expect("recording poisoned").take().unwrap_or_default();
        (out, log)
    }

    /// Computes the recorded norms in as few batches as possible.
    pub fn prefetch(&self, requests: &[(Mult, f64)]) -> Result<()> {
        let mut mults: Vec<Mult> = Vec::new();
        let mut ps: Vec<f64> = Vec::new();
        for (m, p) in requests {
            if !mults.iter().any(|x| x.key() == m.key()) {
                mults.push(*m);
            }
            if !ps.contains(p) {
                ps.push(*p);
            }
        }
        ps.sort_by(f64::total_cmp);
        self.norms(&mults, &ps)?;
        Ok(())
    }

    /// One norm; see [`Analysis::norms`].
    pub fn norm(&self, m: Mult, p: f64) -> Result<f64> {
        Ok(self.norms(&[m], &[p])?[0][0])
    }

    /// `‖m F f‖_2` on the spectral grid, equal to the spatial `L²` norm by
    /// Plancherel.
    fn spectral_l2(&self, m: &Mult) -> f64 {
        let r = self.realize(m);
        let g = self.view.spectrum().samples();
        let mu = self.view.spectral_measure();
        let v: Vec<f64> = r.values.iter().zip(g).map(|(a, b)| a * b).collect();
        match r.cut {
            None => lp_with_weights(mu, &v, 2.0),
            Some(c) => {
                let w: Vec<f64> = mu.iter().zip(&c).map(|(a, b)| a * b).collect();
                lp_cut(&w, &v, 2.0)
            }
        }
    }

    /// `ω_m(f, δ)_p` for several exponents at once.
    pub fn modulus_many(&self, m: f64, delta: f64, ps: &[f64]) -> Result<Vec<f64>> {
        check_order(m)?;
        check_positive("δ", delta)?;
        let mults: Vec<Mult> =
            modulus_steps(delta).into_iter().map(|t| Mult::Difference { t, m }).collect();
        let table = self.norms(&mults, ps)?;
        Ok((0..ps.len()).map(|k| table.iter().map(|row| row[k]).fold(0.0, f64::max)).collect())
    }

    pub fn modulus(&self, m: f64, delta: f64, p: f64) -> Result<f64> {
        Ok(self.modulus_many(m, delta, &[p])?[0])
    }

    /// Prefetches the difference norms needed by many moduli in one batch.
    pub fn prefetch_moduli(&self, orders: &[f64], deltas: &[f64], ps: &[f64]) -> Result<()> {
        let mut mults = Vec::new();
        for &m in orders {
            check_order(m)?;
            for &d in deltas {
                check_positive("δ", d)?;
                mults.extend(modulus_steps(d).into_iter().map(|t| Mult::Difference { t, m }));
            }
        }
        self.norms(&mults, ps)?;
        Ok(())
    }

    /// `‖(Σ_j 2^{2rj} |θ_j f|²)^{1/2}‖_p` for each `r` and `p`, indexed
    /// `[r][p]`, summing over `j ≥ lowest` up to the last block that meets
    /// the spectral grid.
    pub fn square_function_norms(
        &self,
        rs: &[f64],
        ps: &[f64],
        lowest: i32,
    ) -> Result<Vec<Vec<f64>>> {
        for &p in ps {
            if p.is_nan() || p < 1.0 {
                return Err(invalid(format!("norm exponent must satisfy p ≥ 1, got {p}")));
            }
        }
        let top = self.view.spectrum().grid().radius();
        let last = top.log2().floor() as i32 + 1;
        let js: Vec<i32> = (lowest..=last).collect();
        let s = self.view.frequencies();
        let symbols: Vec<Vec<f64>> =
            js.iter().map(|&j| s.iter().map(|x| theta(j, *x)).collect()).collect();
        let cols = self.view.apply_many(&symbols);
        let measure = self.view.spatial_measure();
        Ok(rs
            .iter()
            .map(|&r| {
                let weights: Vec<f64> =
                    js.iter().map(|&j| f64::powf(2.0, 2.0 * r * j as f64)).collect();
                let g: Vec<f64> = cols
                    .outer_iter()
                    .map(|row| row.iter().zip(&weights).map(|(v, w)| w * v * v).sum::<f64>().sqrt())
                    .collect();
                ps.iter().map(|&p| lp_with_weights(measure, &g, p)).collect()
            })
            .collect())
    }

    /// `‖f‖_p` (from the samples on `[0, R]`; the input passed the decay check).
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(invalid(format!("norm exponent must satisfy p ≥ 1, got {p}")));
        }
        Ok(lp_with_weights(self.view.spatial_measure(), self.profile().samples(), p))
    }

    /// Exact `L²` best-approximation error `E_σ(f)_2 = ‖F f · χ_{s>σ}‖_2`.
    pub fn best_error_l2(&self, sigma: f64) -> Result<f64> {
        check_positive("σ", sigma)?;
        self.norm(Mult::HardResidual { sigma }, 2.0)
    }

    /// The approximation error used for `E_σ(f)_p`: exact at `p = 2`, the
    /// residual `‖f − η(·/σ) f‖_p` otherwise (an upper bound, since
    /// `η(·/σ) f` has type `σ`). `σ = 0` gives `‖f‖_p`. Returns the value and
    /// whether it is a surrogate.
    pub fn approximation_error(&self, sigma: f64, p: f64) -> Result<(f64, bool)> {
        if sigma == 0.0 {
            return Ok((self.lp_norm(p)?, false));
        }
        check_positive("σ", sigma)?;
        if p == 2.0 {
            Ok((self.best_error_l2(sigma)?, false))
        } else {
            Ok((self.norm(Mult::Residual { sigma }, p)?, true))
        }
    }
}

fn cut_factors(cut: Vec<f64>, base: &[f64]) -> Vec<f64> {
    cut.iter().zip(base).map(|(c, w)| c / w).collect()
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

fn check_order(m: f64) -> Result<()> {
    if m.is_finite() && m > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("modulus order must be positive, got {m}")))
    }
}

/// `{δ·2^{-i/4} : i = 0..16}`.
pub fn modulus_steps(delta: f64) -> Vec<f64> {
    (0..MODULUS_STEPS).map(|i| delta * f64::powf(2.0, -(i as f64) / 4.0)).collect()
}

/// How an [`Approximant`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxMethod {
    /// `F^{-1}(χ_{[0,σ]} F f)`.
    SpectralTruncation,
    /// `η_j f`.
    ValleePoussin,
}

/// A band-limited approximant with its error.
#[derive(Debug, Clone)]
pub struct Approximant {
    pub g: RadialProfile,
    pub error: f64,
    pub method: ApproxMethod,
}

/// `ω_m(f, δ)_p = max_{i=0..16} ‖Δ^m_{δ 2^{-i/4}} f‖_p`.
pub fn modulus(f: &RadialProfile, m: f64, delta: f64, p: f64) -> Result<f64> {
    Analysis::new(f)?.modulus(m, delta, p)
}

/// The `L²` best approximation by functions of type `σ`.
pub fn best_approx_l2(f: &RadialProfile, sigma: f64) -> Result<Approximant> {
    check_positive("σ", sigma)?;
    let a = Analysis::new(f)?;
    let error = a.best_error_l2(sigma)?;
    let grid = a.view.spectrum().grid();
    let cut = cut_factors(grid.interval_weights(0.0, sigma), grid.weights());
    let mut g = a.view.apply(&cut);
    g.set_band_limit(Some(sigma));
    Ok(Approximant { g, error, method: ApproxMethod::SpectralTruncation })
}

/// The near-best approximant `η_j f` of type `2^j` and its error
/// `‖f − η_j f‖_p`.
pub fn near_best_approx(f: &RadialProfile, j: i32, p: f64) -> Result<Approximant> {
    let a = Analysis::new(f)?;
    let sigma = f64::powi(2.0, j);
    let error = a.norm(Mult::Residual { sigma }, p)?;
    let values: Vec<f64> = a.view.frequencies().iter().map(|s| smooth_cutoff(s / sigma)).collect();
    let mut g = a.view.apply(&values);
    g.set_band_limit(Some(sigma));
    Ok(Approximant { g, error, method: ApproxMethod::ValleePoussin })
}

/// Dyadic level used by the realization at step `t`: the smallest `j` with
/// `2^j ≥ 1/t`.
pub fn realization_level(t: f64) -> i32 {
    let x = (1.0 / t).log2();
    let n = x.round();
    if (x - n).abs() < 1e-12 {
        n as i32
    } else {
        x.ceil() as i32
    }
}

impl Analysis {
    /// `R*_r(f, t)_p = ‖f − η_j f‖_p + t^r ‖(−Δ)^{r/2} η_j f‖_p`,
    /// `j = realization_level(t)`.
    pub fn k_functional_realization(&self, t: f64, r: f64, p: f64) -> Result<f64> {
        check_positive("t", t)?;
        check_positive("r", r)?;
        let sigma = f64::powi(2.0, realization_level(t));
        let v =
            self.norms(&[Mult::Residual { sigma }, Mult::LaplacianSmooth { r, sigma }], &[p])?;
        Ok(v[0][0] + t.powf(r) * v[1][0])
    }
}

/// See [`Analysis::k_functional_realization`].
pub fn k_functional_realization(f: &RadialProfile, t: f64, r: f64, p: f64) -> Result<f64> {
    Analysis::new(f)?.k_functional_realization(t, r, p)
}

/// Shared handle used by sweeps.
pub type SharedAnalysis = Arc<Analysis>;

impl Profile<crate::measure::Spatial> {
    /// Convenience: an [`Analysis`] of this profile.
    pub fn analysis(&self) -> Result<Analysis> {
        Analysis::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{make_grid, WeightParams};

    fn gaussian(lambda: f64) -> RadialProfile {
        let grid = Arc::new(make_grid(40.0, 64, 64).unwrap());
        RadialProfile::from_fn(WeightParams::new(lambda).unwrap(), grid, |r| (-0.5 * r * r).exp())
            .unwrap()
    }

    #[test]
    fn modulus_monotone_in_delta() {
        let a = gaussian(0.7).analysis().unwrap();
        let mut prev = 0.0;
        for i in 0..8 {
            let d = 0.05 * f64::powi(1.6, i);
            let w = a.modulus(1.5, d, 2.0).unwrap();
            assert!(w >= prev);
            prev = w;
        }
    }

    #[test]
    fn spectral_and_spatial_l2_agree() {
        let a = gaussian(1.5).analysis().unwrap();
        let m = Mult::Difference { t: 0.5, m: 2.0 };
        let spectral = a.norm(m, 2.0).unwrap();
        let cols = a.view().apply_many(&[difference_symbol(1.5, 0.5, 2.0, a.view().frequencies())]);
        let spatial = a.view().column_norms(&cols, &[2.0])[0][0];
        assert!((spectral - spatial).abs() < 1e-12 * spectral.max(1e-300) + 1e-14);
    }

    #[test]
    fn realization_level_ties() {
        assert_eq!(realization_level(0.25), 2);
        assert_eq!(realization_level(0.3), 2);
        assert_eq!(realization_level(0.2), 3);
        assert_eq!(realization_level(2.0), -1);
    }

    #[test]
    fn best_l2_error_of_gaussian_is_small_far_out() {
        let f = gaussian(0.2);
        let a = best_approx_l2(&f, 30.0).unwrap();
        assert!(a.error < 1e-12);
        assert_eq!(a.g.band_limit(), Some(30.0));
    }
}
