//! Weighted radial grids, the normalized measure `dμ_k` on the radial line,
//! and sampled profiles.
//!
//! A radial function is stored through its profile `f₀` on a composite
//! Gauss–Legendre grid over `[0, R]`. The measure reduces to
//! `∫ f dμ_k = (2^λ Γ(λ+1))^{-1} ∫₀^∞ f₀(r) r^{2λ+1} dr`.

use std::marker::PhantomData;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, DunklError, Result};
use crate::specfun::{ln_gamma, BesselOrder};

/// Relative size below which a profile counts as decayed at its boundary.
pub const TAIL_TOLERANCE: f64 = 1e-14;

/// Maximum number of dyadic refinements of the first panel.
const MAX_GEOMETRIC_REFINEMENTS: usize = 10;

/// Fraction of the Nyquist-like node density used for the spectral cap.
const SPECTRAL_CAP_FACTOR: f64 = 0.8;

/// The weighted setting: `λ_k`, the generalized dimension `d_k = 2(λ_k+1)`
/// and, for the rank-one case, the multiplicity `k = λ_k + 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    lambda_k: f64,
    d_k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank1_k: Option<f64>,
}

impl WeightParams {
    pub fn new(lambda_k: f64) -> Result<Self> {
        if !lambda_k.is_finite() || lambda_k <= -0.5 {
            return Err(invalid(format!("λ_k must exceed −1/2, got {lambda_k}")));
        }
        Ok(Self { lambda_k, d_k: 2.0 * (lambda_k + 1.0), rank1_k: None })
    }

    /// Rank-one setting with multiplicity `k ≥ 0` (`λ = k − 1/2`).
    pub fn rank_one(k: f64) -> Result<Self> {
        if !k.is_finite() || k < 0.0 {
            return Err(invalid(format!("multiplicity must be ≥ 0, got {k}")));
        }
        let lambda_k = k - 0.5;
        Ok(Self { lambda_k, d_k: 2.0 * (lambda_k + 1.0), rank1_k: Some(k) })
    }

    /// Re-checks invariants; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        let fresh = match self.rank1_k {
            Some(k) => Self::rank_one(k)?,
            None => Self::new(self.lambda_k)?,
        };
        if (fresh.lambda_k - self.lambda_k).abs() > 1e-12 || (fresh.d_k - self.d_k).abs() > 1e-12 {
            return Err(invalid("inconsistent λ_k, d_k and multiplicity"));
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        self.lambda_k
    }

    pub fn dim(&self) -> f64 {
        self.d_k
    }

    pub fn multiplicity(&self) -> Option<f64> {
        self.rank1_k
    }

    pub fn order(&self) -> BesselOrder {
        BesselOrder::new(self.lambda_k).expect("λ_k > −1/2 is a valid Bessel order")
    }

    /// The same setting shifted to order `λ + 1` (used by the odd rank-one part).
    pub fn raised(&self) -> Self {
        Self { lambda_k: self.lambda_k + 1.0, d_k: self.d_k + 2.0, rank1_k: None }
    }

    /// `(2^λ Γ(λ+1))^{-1}`.
    pub fn measure_constant(&self) -> f64 {
        (-self.lambda_k * std::f64::consts::LN_2 - ln_gamma(self.lambda_k + 1.0)).exp()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Barycentric weights for Gauss–Legendre nodes.
fn barycentric_weights(x: &[f64], w: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(w)
        .enumerate()
        .map(|(j, (&xj, &wj))| {
            let v = ((1.0 - xj * xj) * wj).sqrt();
            if j % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

/// Identifies the node layout of a grid up to scaling by its radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridShape {
    pub panels: usize,
    pub nodes_per_panel: usize,
}

/// Composite Gauss–Legendre grid on `[0, R]`.
///
/// The nodes are `R · u_i` for unit nodes `u_i` that depend only on the
/// [`GridShape`]. The grid also records the radius `S` of the dual grid on
/// which its transforms live; all kernel values are then `j_λ(R S u_i u_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    radius: f64,
    dual_radius: f64,
    shape: GridShape,
    unit_edges: Arc<Vec<f64>>,
    unit_nodes: Arc<Vec<f64>>,
    unit_weights: Arc<Vec<f64>>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Builds the composite grid on `[0, R]` with `panels` panels of
/// `nodes_per_panel` Gauss–Legendre nodes each.
///
/// The panels are uniform except that the first uniform panel is split
/// dyadically toward 0 (at most ten times) to resolve the weight
/// `r^{2λ+1}`. The dual radius defaults to `min(R, cap)`.
pub fn make_grid(radius: f64, panels: usize, nodes_per_panel: usize) -> Result<RadialGrid> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(invalid(format!("grid radius must be positive, got {radius}")));
    }
    if panels < 1 {
        return Err(invalid("grid needs at least one panel"));
    }
    if nodes_per_panel < 2 {
        return Err(invalid("grid needs at least two nodes per panel"));
    }
    let shape = GridShape { panels, nodes_per_panel };
    let (unit_edges, unit_nodes, unit_weights) = unit_layout(shape);
    let mut grid = RadialGrid {
        radius,
        dual_radius: radius,
        shape,
        nodes: unit_nodes.iter().map(|u| u * radius).collect(),
        weights: unit_weights.iter().map(|w| w * radius).collect(),
        unit_edges: Arc::new(unit_edges),
        unit_nodes: Arc::new(unit_nodes),
        unit_weights: Arc::new(unit_weights),
    };
    grid.dual_radius = radius.min(grid.spectral_cap());
    Ok(grid)
}

fn unit_layout(shape: GridShape) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n_geo = MAX_GEOMETRIC_REFINEMENTS.min(shape.panels - 1);
    let n_uni = shape.panels - n_geo;
    let h = 1.0 / n_uni as f64;
    let mut edges = vec![0.0];
    for i in (0..n_geo).rev() {
        edges.push(h / f64::powi(2.0, i as i32 + 1));
    }
    for i in 1..=n_uni {
        edges.push(if i == n_uni { 1.0 } else { h * i as f64 });
    }
    let (gx, gw) = gauss_legendre(shape.nodes_per_panel);
    let mut nodes = Vec::with_capacity(shape.panels * shape.nodes_per_panel);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in gx.iter().zip(&gw) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    (edges, nodes, weights)
}

impl RadialGrid {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn panels(&self) -> usize {
        self.shape.panels
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.shape.nodes_per_panel
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn unit_nodes(&self) -> &[f64] {
        &self.unit_nodes
    }

    /// Panel boundaries in absolute coordinates.
    pub fn edges(&self) -> Vec<f64> {
        self.unit_edges.iter().map(|e| e * self.radius).collect()
    }

    /// Largest frequency the grid resolves: `0.8 · N / R`.
    pub fn spectral_cap(&self) -> f64 {
        SPECTRAL_CAP_FACTOR * self.len() as f64 / self.radius
    }

    /// Radius of the grid on which transforms of profiles on this grid live.
    pub fn dual_radius(&self) -> f64 {
        self.dual_radius
    }

    /// `R · S`; together with the shape it determines the kernel matrix.
    pub fn bandwidth_product(&self) -> f64 {
        self.radius * self.dual_radius
    }

    /// Returns a copy whose transforms live on `[0, S]`.
    pub fn with_dual_radius(mut self, dual_radius: f64) -> Result<Self> {
        if !dual_radius.is_finite() || dual_radius <= 0.0 {
            return Err(invalid(format!("dual radius must be positive, got {dual_radius}")));
        }
        let cap = self.spectral_cap();
        if dual_radius > cap * (1.0 + 1e-12) {
            return Err(DunklError::Resolution { requested: dual_radius, cap });
        }
        self.dual_radius = dual_radius;
        Ok(self)
    }

    /// The grid of the transformed variable. Its own dual is this grid.
    pub fn dual(&self) -> RadialGrid {
        let s = self.dual_radius;
        RadialGrid {
            radius: s,
            dual_radius: self.radius,
            shape: self.shape,
            unit_edges: Arc::clone(&self.unit_edges),
            unit_nodes: Arc::clone(&self.unit_nodes),
            unit_weights: Arc::clone(&self.unit_weights),
            nodes: self.unit_nodes.iter().map(|u| u * s).collect(),
            weights: self.unit_weights.iter().map(|w| w * s).collect(),
        }
    }

    /// True when `other` has the same nodes and the same dual.
    pub fn same_layout(&self, other: &RadialGrid) -> bool {
        self.shape == other.shape
            && self.radius.to_bits() == other.radius.to_bits()
            && self.dual_radius.to_bits() == other.dual_radius.to_bits()
    }

    /// Quadrature weights of `r^{2λ+1} dr` scaled by the measure constant,
    /// so that `Σ_i m_i f(r_i) = ∫ f dμ_k`.
    pub fn measure_weights(&self, params: &WeightParams) -> Vec<f64> {
        let c = params.measure_constant();
        let e = 2.0 * params.lambda() + 1.0;
        self.nodes.iter().zip(&self.weights).map(|(r, w)| c * w * r.powf(e)).collect()
    }

    /// Weights `v` with `Σ v_i φ(r_i) ≈ ∫_a^b φ(r) dr` for smooth `φ`.
    ///
    /// Panels fully inside `[a, b]` keep their Gauss weights. A panel cut by
    /// an endpoint gets the integrals of its Lagrange basis polynomials over
    /// the covered part, so the cut is exact for the panel's interpolant.
    pub fn interval_weights(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.add_interval_weights(a, b, 1.0, &mut out);
        out
    }

    /// Accumulates `scale · interval_weights(a, b)` into `out`.
    pub fn add_interval_weights(&self, a: f64, b: f64, scale: f64, out: &mut [f64]) {
        let a = a.max(0.0);
        let b = b.min(self.radius);
        if b <= a {
            return;
        }
        let n = self.shape.nodes_per_panel;
        let (gx, gw) = gauss_legendre(n);
        let bary = barycentric_weights(&gx, &gw);
        for (p, pair) in self.unit_edges.windows(2).enumerate() {
            let e0 = pair[0] * self.radius;
            let e1 = pair[1] * self.radius;
            let lo = a.max(e0);
            let hi = b.min(e1);
            if hi <= lo {
                continue;
            }
            let base = p * n;
            if lo <= e0 && hi >= e1 {
                for i in 0..n {
                    out[base + i] += scale * self.weights[base + i];
                }
                continue;
            }
            // map [lo, hi] into the panel's reference coordinate
            let mid = 0.5 * (e0 + e1);
            let half = 0.5 * (e1 - e0);
            let (ylo, yhi) = ((lo - mid) / half, (hi - mid) / half);
            let qh = 0.5 * (yhi - ylo);
            let qm = 0.5 * (yhi + ylo);
            let mut beta = vec![0.0; n];
            for (xq, wq) in gx.iter().zip(&gw) {
                let y = qm + qh * xq;
                add_lagrange_row(&gx, &bary, y, wq * qh, &mut beta);
            }
            for i in 0..n {
                out[base + i] += scale * beta[i] * half;
            }
        }
    }
}

/// `out_j += scale · ℓ_j(y)` for the Lagrange basis on `x`.
fn add_lagrange_row(x: &[f64], bary: &[f64], y: f64, scale: f64, out: &mut [f64]) {
    if let Some(j) = x.iter().position(|&xj| xj == y) {
        out[j] += scale;
        return;
    }
    let mut denom = 0.0;
    for (xj, vj) in x.iter().zip(bary) {
        denom += vj / (y - xj);
    }
    for (j, (xj, vj)) in x.iter().zip(bary).enumerate() {
        out[j] += scale * (vj / (y - xj)) / denom;
    }
}

/// Marker for the variable a profile is sampled in.
pub trait Domain: Clone + std::fmt::Debug + Send + Sync + 'static {
    /// Sidecar label.
    const NAME: &'static str;
    /// Whether integrals over the profile require the boundary decay check.
    const REQUIRES_TAIL: bool;
}

/// The space variable `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spatial;

/// The frequency variable `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spectral;

impl Domain for Spatial {
    const NAME: &'static str = "spatial";
    const REQUIRES_TAIL: bool = true;
}

// A spectral profile is by construction the transform restricted to its
// grid, so integrals over it are taken as they stand.
impl Domain for Spectral {
    const NAME: &'static str = "spectral";
    const REQUIRES_TAIL: bool = false;
}

/// A radial function sampled on a [`RadialGrid`].
#[derive(Debug, Clone)]
pub struct Profile<D: Domain> {
    params: WeightParams,
    grid: Arc<RadialGrid>,
    samples: Vec<f64>,
    band_limit: Option<f64>,
    _domain: PhantomData<D>,
}

/// A radial profile in the space variable.
pub type RadialProfile = Profile<Spatial>;
/// A radial profile in the frequency variable.
pub type SpectralProfile = Profile<Spectral>;

/// Boundary decay information of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailInfo {
    /// Max |f| over the last panel.
    pub boundary: f64,
    /// Max |f| over the grid.
    pub max: f64,
}

impl TailInfo {
    pub fn decayed(&self) -> bool {
        self.boundary <= TAIL_TOLERANCE * self.max
    }
}

impl<D: Domain> Profile<D> {
    pub fn from_samples(
        params: WeightParams,
        grid: Arc<RadialGrid>,
        samples: Vec<f64>,
    ) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(DunklError::GridMismatch(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite sample at node {i}")));
        }
        Ok(Self { params, grid, samples, band_limit: None, _domain: PhantomData })
    }

    pub fn from_fn(
        params: WeightParams,
        grid: Arc<RadialGrid>,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let samples = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::from_samples(params, grid, samples)
    }

    pub fn zeros(params: WeightParams, grid: Arc<RadialGrid>) -> Self {
        let samples = vec![0.0; grid.len()];
        Self { params, grid, samples, band_limit: None, _domain: PhantomData }
    }

    pub(crate) fn from_parts(
        params: WeightParams,
        grid: Arc<RadialGrid>,
        samples: Vec<f64>,
        band_limit: Option<f64>,
    ) -> Self {
        debug_assert_eq!(samples.len(), grid.len());
        Self { params, grid, samples, band_limit, _domain: PhantomData }
    }

    pub fn params(&self) -> &WeightParams {
        &self.params
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn band_limit(&self) -> Option<f64> {
        self.band_limit
    }

    /// Declares a band limit. For spectral profiles the samples must vanish
    /// (below `1e−13·max`) beyond it.
    pub fn with_band_limit(mut self, sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(invalid(format!("band limit must be positive, got {sigma}")));
        }
        if D::NAME == Spectral::NAME {
            let max = self.max_abs();
            let leak = self
                .grid
                .nodes()
                .iter()
                .zip(&self.samples)
                .filter(|(s, _)| **s > sigma)
                .fold(0.0_f64, |m, (_, v)| m.max(v.abs()));
            if leak > 1e-13 * max {
                return Err(invalid(format!(
                    "spectrum does not vanish beyond σ = {sigma}: {leak:.3e} relative to {max:.3e}"
                )));
            }
        }
        self.band_limit = Some(sigma);
        Ok(self)
    }

    pub(crate) fn set_band_limit(&mut self, sigma: Option<f64>) {
        self.band_limit = sigma;
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn tail(&self) -> TailInfo {
        let n = self.grid.nodes_per_panel();
        let start = self.samples.len().saturating_sub(n);
        let boundary = self.samples[start..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        TailInfo { boundary, max: self.max_abs() }
    }

    /// Whether `|f| < 1e−14·max` over the last panel.
    pub fn tail_flag(&self) -> bool {
        self.tail().decayed()
    }

    pub(crate) fn check_tail(&self) -> Result<()> {
        let t = self.tail();
        if t.decayed() {
            Ok(())
        } else {
            Err(DunklError::Truncation {
                boundary: t.boundary,
                tolerance: TAIL_TOLERANCE * t.max,
                max: t.max,
            })
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.samples.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// Pointwise `a·self + b·other` on a shared grid.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_compatible(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(x, y)| a * x + b * y).collect();
        let band_limit = match (self.band_limit, other.band_limit) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        };
        Ok(Self::from_parts(self.params, Arc::clone(&self.grid), samples, band_limit))
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        let samples = self.grid.nodes().iter().zip(&self.samples).map(|(&r, &v)| f(r, v)).collect();
        Self::from_parts(self.params, Arc::clone(&self.grid), samples, None)
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.grid.same_layout(&other.grid) {
            return Err(DunklError::GridMismatch("profiles live on different grids".into()));
        }
        if self.params != other.params {
            return Err(DunklError::GridMismatch(
                "profiles carry different weight parameters".into(),
            ));
        }
        Ok(())
    }
}

/// `∫ f dμ_k`.
pub fn weighted_integral<D: Domain>(f: &Profile<D>) -> Result<f64> {
    if D::REQUIRES_TAIL {
        f.check_tail()?;
    }
    let m = f.grid().measure_weights(f.params());
    Ok(m.iter().zip(f.samples()).map(|(w, v)| w * v).sum())
}

/// `(∫ |f|^p dμ_k)^{1/p}`, or the grid supremum for `p = ∞`.
pub fn weighted_lp_norm<D: Domain>(f: &Profile<D>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(invalid(format!("norm exponent must satisfy p ≥ 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    if D::REQUIRES_TAIL {
        f.check_tail()?;
    }
    let m = f.grid().measure_weights(f.params());
    Ok(lp_with_weights(&m, f.samples(), p))
}

/// `(∫_0^R |f|^p dμ_k)^{1/p}` without the boundary decay check: the norm of
/// the profile as a function on the grid. Used for derived profiles whose
/// decay is algebraic (fractional differences of non-even order, for example).
pub fn weighted_lp_norm_on_grid<D: Domain>(f: &Profile<D>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(invalid(format!("norm exponent must satisfy p ≥ 1, got {p}")));
    }
    let m = f.grid().measure_weights(f.params());
    Ok(lp_with_weights(&m, f.samples(), p))
}

/// `‖a − b‖_p` over the grid. The decay check applies to the reference `b`
/// only: the difference is typically rounding noise, and `a` may be a
/// reconstruction whose boundary values are exactly what is being measured.
pub fn weighted_lp_distance<D: Domain>(a: &Profile<D>, b: &Profile<D>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(invalid(format!("norm exponent must satisfy p ≥ 1, got {p}")));
    }
    a.check_compatible(b)?;
    if D::REQUIRES_TAIL && !p.is_infinite() {
        b.check_tail()?;
    }
    let diff: Vec<f64> = a.samples().iter().zip(b.samples()).map(|(x, y)| x - y).collect();
    let m = a.grid().measure_weights(a.params());
    Ok(lp_with_weights(&m, &diff, p))
}

/// `(Σ m_i |v_i|^p)^{1/p}` with shortcuts for common exponents.
pub(crate) fn lp_with_weights(m: &[f64], v: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return m
            .iter()
            .zip(v)
            .filter(|(w, _)| **w != 0.0)
            .fold(0.0_f64, |acc, (_, x)| acc.max(x.abs()));
    }
    let sum: f64 = if p == 2.0 {
        m.iter().zip(v).map(|(w, x)| w * x * x).sum()
    } else if p == 1.0 {
        m.iter().zip(v).map(|(w, x)| w * x.abs()).sum()
    } else {
        m.iter().zip(v).map(|(w, x)| if *x == 0.0 { 0.0 } else { w * x.abs().powf(p) }).sum()
    };
    if sum <= 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        sum.sqrt()
    } else if p == 1.0 {
        sum
    } else {
        sum.powf(1.0 / p)
    }
}
