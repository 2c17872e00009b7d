//! Radial Fourier multipliers `f ↦ F_k^{-1}(m(|·|) F_k f)`: generalized
//! translation, fractional powers of the Dunkl Laplacian, smooth dyadic
//! cutoffs, Littlewood–Paley blocks and fractional differences.

use std::sync::Arc;

use ndarray::{Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, DunklError, Result};
use crate::measure::{lp_with_weights, Profile, RadialProfile, SpectralProfile, TAIL_TOLERANCE};
use crate::specfun::NormalizedBessel;
use crate::transform::{dunkl_transform_radial, transform_columns, transform_vector};

/// The gluing function `h(u) = e^{-1/u}` (0 for `u ≤ 0`).
fn glue(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth radial cutoff: 1 on `[0, 1/2]`, 0 on `[1, ∞)`, and
/// `h(2−2s)/(h(2−2s)+h(2s−1))` in between.
pub fn smooth_cutoff(s: f64) -> f64 {
    let s = s.abs();
    if s <= 0.5 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let a = glue(2.0 - 2.0 * s);
        let b = glue(2.0 * s - 1.0);
        a / (a + b)
    }
}

/// `η_j(s) = η(2^{-j} s)`.
pub fn eta(j: i32, s: f64) -> f64 {
    smooth_cutoff(s * f64::powi(2.0, -j))
}

/// `θ_j = η_j − η_{j−1}`.
pub fn theta(j: i32, s: f64) -> f64 {
    eta(j, s) - eta(j - 1, s)
}

/// A radial multiplier symbol. Serialized as `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum RadialSymbol {
    /// `j_λ(t s)`.
    Translation { t: f64 },
    /// `s^r`.
    FracLaplacian { r: f64 },
    /// `η_j(s)`.
    CutoffEta { j: i32 },
    /// `θ_j(s)`.
    BlockTheta { j: i32 },
    /// `(1 − j_λ(t s))^{m/2}`.
    Difference { t: f64, m: f64 },
    /// Piecewise-linear interpolation of `(s, value)` pairs, held constant
    /// outside the table.
    Custom { table: Vec<(f64, f64)> },
}

impl RadialSymbol {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Translation { t } if !(t.is_finite() && *t >= 0.0) => {
                Err(invalid(format!("translation needs t ≥ 0, got {t}")))
            }
            Self::FracLaplacian { r } if !(r.is_finite() && *r > 0.0) => {
                Err(invalid(format!("fractional power needs r > 0, got {r}")))
            }
            Self::Difference { t, m }
                if !(t.is_finite() && *t >= 0.0 && m.is_finite() && *m > 0.0) =>
            {
                Err(invalid(format!("difference needs t ≥ 0 and m > 0, got t={t}, m={m}")))
            }
            Self::Custom { table } => {
                if table.is_empty() {
                    return Err(invalid("custom symbol table is empty"));
                }
                if table.iter().any(|(s, v)| !s.is_finite() || !v.is_finite()) {
                    return Err(invalid("custom symbol table has non-finite entries"));
                }
                if table.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(invalid("custom symbol abscissae must increase"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Spectral support radius, when the symbol vanishes beyond it.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            Self::CutoffEta { j } | Self::BlockTheta { j } => Some(f64::powi(2.0, *j)),
            _ => None,
        }
    }

    /// Values of the symbol at `s` for order `λ`.
    pub fn values(&self, lambda: f64, s: &[f64]) -> Vec<f64> {
        match self {
            Self::Translation { t } => {
                let b = NormalizedBessel::new(lambda);
                s.iter().map(|x| b.eval(t * x)).collect()
            }
            Self::FracLaplacian { r } => s.iter().map(|x| x.powf(*r)).collect(),
            Self::CutoffEta { j } => s.iter().map(|x| eta(*j, *x)).collect(),
            Self::BlockTheta { j } => s.iter().map(|x| theta(*j, *x)).collect(),
            Self::Difference { t, m } => difference_symbol(lambda, *t, *m, s),
            Self::Custom { table } => s.iter().map(|x| interpolate(table, *x)).collect(),
        }
    }
}

fn interpolate(table: &[(f64, f64)], x: f64) -> f64 {
    let first = table[0];
    let last = table[table.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let i = table.partition_point(|(s, _)| *s <= x);
    let (x0, y0) = table[i - 1];
    let (x1, y1) = table[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// `(1 − j_λ(t s))^{m/2}`; the base is nonnegative for `λ ≥ −1/2`, clamped
/// at 0 against rounding.
pub(crate) fn difference_symbol(lambda: f64, t: f64, m: f64, s: &[f64]) -> Vec<f64> {
    let b = NormalizedBessel::new(lambda);
    let half = 0.5 * m;
    s.iter()
        .map(|x| {
            let base = b.one_minus(t * x).max(0.0);
            if half == 1.0 {
                base
            } else if half == 2.0 {
                base * base
            } else {
                base.powf(half)
            }
        })
        .collect()
}

/// A profile together with its transform, for applying many multipliers.
#[derive(Debug, Clone)]
pub struct SpectralView {
    f: RadialProfile,
    spectrum: SpectralProfile,
    spatial_measure: Vec<f64>,
    spectral_measure: Vec<f64>,
}

impl SpectralView {
    pub fn new(f: &RadialProfile) -> Result<Self> {
        let spectrum = dunkl_transform_radial(f)?;
        Ok(Self::from_pair(f.clone(), spectrum))
    }

    pub(crate) fn from_pair(f: RadialProfile, spectrum: SpectralProfile) -> Self {
        let spatial_measure = f.grid().measure_weights(f.params());
        let spectral_measure = spectrum.grid().measure_weights(spectrum.params());
        Self { f, spectrum, spatial_measure, spectral_measure }
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.f
    }

    pub fn spectrum(&self) -> &SpectralProfile {
        &self.spectrum
    }

    pub fn lambda(&self) -> f64 {
        self.f.params().lambda()
    }

    pub fn frequencies(&self) -> &[f64] {
        self.spectrum.grid().nodes()
    }

    pub fn radii(&self) -> &[f64] {
        self.f.grid().nodes()
    }

    pub fn spatial_measure(&self) -> &[f64] {
        &self.spatial_measure
    }

    pub fn spectral_measure(&self) -> &[f64] {
        &self.spectral_measure
    }

    /// `F^{-1}(m · F f)` as a profile.
    pub fn apply(&self, multiplier: &[f64]) -> RadialProfile {
        let h: Vec<f64> =
            multiplier.iter().zip(self.spectrum.samples()).map(|(m, g)| m * g).collect();
        let out = transform_vector(self.spectrum.grid(), self.lambda(), &self.spectral_measure, &h);
        Profile::from_parts(*self.f.params(), Arc::clone(self.f.grid()), out, None)
    }

    /// `F^{-1}(m_b · F f)` for every multiplier, as columns of an `N × B` array.
    pub fn apply_many(&self, multipliers: &[Vec<f64>]) -> Array2<f64> {
        let n = self.spectrum.samples().len();
        let mut cols = Array2::zeros((n, multipliers.len()));
        for (b, m) in multipliers.iter().enumerate() {
            let mut col = cols.column_mut(b);
            for (i, (mv, g)) in m.iter().zip(self.spectrum.samples()).enumerate() {
                col[i] = mv * g;
            }
        }
        transform_columns(self.spectrum.grid(), self.lambda(), &self.spectral_measure, cols.view())
    }

    /// Spatial `L^p` norms of each column of `columns` for each `p`.
    /// Result is indexed `[column][p]`.
    pub fn column_norms(&self, columns: &Array2<f64>, ps: &[f64]) -> Vec<Vec<f64>> {
        columns
            .axis_iter(Axis(1))
            .map(|c| {
                let v = c.to_vec();
                ps.iter().map(|&p| lp_with_weights(&self.spatial_measure, &v, p)).collect()
            })
            .collect()
    }

    /// `‖m · F f‖_q` on the spectral grid. `m` may carry quadrature
    /// quadrature factors from cut panels.
    pub fn spectral_norm(&self, multiplier: Option<&[f64]>, q: f64) -> f64 {
        let g = self.spectrum.samples();
        match multiplier {
            None => lp_with_weights(&self.spectral_measure, g, q),
            Some(m) => {
                let v: Vec<f64> = m.iter().zip(g).map(|(a, b)| a * b).collect();
                lp_with_weights(&self.spectral_measure, &v, q)
            }
        }
    }

    /// `‖F f‖_q` restricted to `[a, b)` with exact cuts at the endpoints.
    pub fn spectral_norm_on(&self, a: f64, b: f64, q: f64) -> f64 {
        let grid = self.spectrum.grid();
        let cut = grid.interval_weights(a, b);
        let c = self.spectrum.params().measure_constant();
        let e = 2.0 * self.lambda() + 1.0;
        let m: Vec<f64> = grid.nodes().iter().zip(&cut).map(|(s, w)| c * w * s.powf(e)).collect();
        lp_cut(&m, self.spectrum.samples(), q)
    }
}

/// `(Σ m_i |v_i|^q)^{1/q}` where `m` may contain small negative entries from
/// cut panels; the sum is clamped at 0.
pub(crate) fn lp_cut(m: &[f64], v: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return lp_with_weights(m, v, q);
    }
    let sum: f64 =
        m.iter().zip(v).map(|(w, x)| if *x == 0.0 { 0.0 } else { w * x.abs().powf(q) }).sum();
    if sum <= 0.0 {
        0.0
    } else {
        sum.powf(1.0 / q)
    }
}

/// `F_k^{-1}(sym · F_k f)`.
pub fn apply_symbol(f: &RadialProfile, sym: &RadialSymbol) -> Result<RadialProfile> {
    apply_symbol_product(f, std::slice::from_ref(sym))
}

/// `F_k^{-1}((Π sym_i) · F_k f)`.
pub fn apply_symbol_product(f: &RadialProfile, syms: &[RadialSymbol]) -> Result<RadialProfile> {
    for s in syms {
        s.validate()?;
    }
    let view = SpectralView::new(f)?;
    let lambda = view.lambda();
    let mut m = vec![1.0; view.frequencies().len()];
    for s in syms {
        for (a, b) in m.iter_mut().zip(s.values(lambda, view.frequencies())) {
            *a *= b;
        }
    }
    let mut out = view.apply(&m);
    let support = syms
        .iter()
        .filter_map(|s| s.support_radius())
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.min(r))));
    out.set_band_limit(support.or(f.band_limit()));
    Ok(out)
}

/// Generalized translation `T^t f`, the multiplier `j_λ(t s)`.
pub fn translation(f: &RadialProfile, t: f64) -> Result<RadialProfile> {
    apply_symbol(f, &RadialSymbol::Translation { t })
}

/// `(−Δ_k)^{r/2} f`, the multiplier `s^r`. Refused when `s^r F_k f` has not
/// decayed at the edge of the spectral grid.
pub fn fractional_laplacian(f: &RadialProfile, r: f64) -> Result<RadialProfile> {
    let sym = RadialSymbol::FracLaplacian { r };
    sym.validate()?;
    let view = SpectralView::new(f)?;
    let m = sym.values(view.lambda(), view.frequencies());
    let weighted = view.spectrum().map(|s, g| s.powf(r) * g);
    let tail = weighted.tail();
    // rounding in the transform leaves an absolute floor of about
    // sqrt(N)·ε·Σ|μ_i f_i| that s^r amplifies at the grid edge
    let mass: f64 =
        view.spatial_measure().iter().zip(f.samples()).map(|(m, v)| (m * v).abs()).sum();
    let floor = (f.samples().len() as f64).sqrt() * f64::EPSILON * mass;
    let tolerance =
        (TAIL_TOLERANCE * tail.max).max(floor * view.spectrum().grid().radius().powf(r));
    if tail.boundary > tolerance {
        return Err(DunklError::Truncation { boundary: tail.boundary, tolerance, max: tail.max });
    }
    let mut out = view.apply(&m);
    out.set_band_limit(f.band_limit());
    Ok(out)
}

/// Which dyadic projection [`band_projection`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandKind {
    /// `η_j f`.
    Eta,
    /// `θ_j f`.
    Theta,
}

/// `η_j f` or `θ_j f`; the result carries band limit `2^j`.
pub fn band_projection(f: &RadialProfile, j: i32, kind: BandKind) -> Result<RadialProfile> {
    let sym = match kind {
        BandKind::Eta => RadialSymbol::CutoffEta { j },
        BandKind::Theta => RadialSymbol::BlockTheta { j },
    };
    apply_symbol(f, &sym)
}

/// `Δ_t^m f = (I − T^t)^{m/2} f` through the multiplier `(1 − j_λ(ts))^{m/2}`.
pub fn fractional_difference(f: &RadialProfile, t: f64, m: f64) -> Result<RadialProfile> {
    if !(t.is_finite() && t > 0.0) {
        return Err(invalid(format!("difference step must be positive, got {t}")));
    }
    apply_symbol(f, &RadialSymbol::Difference { t, m })
}

/// `f ∗_k g` for radial `g`: the multiplier `F_k g`.
pub fn convolve_radial(f: &RadialProfile, g: &RadialProfile) -> Result<RadialProfile> {
    f.check_compatible(g)?;
    let view = SpectralView::new(f)?;
    let gg = dunkl_transform_radial(g)?;
    Ok(view.apply(gg.samples()))
}

/// `C(a, s)` for real `a`.
pub fn binomial(a: f64, s: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..s {
        c *= (a - i as f64) / (i as f64 + 1.0);
    }
    c
}

/// `Σ_{s ≥ terms} |C(m/2, s)|`, which bounds the operator-norm remainder of
/// the truncated binomial series since `‖T^t‖ ≤ 1`. Zero when `m/2` is an
/// integer below `terms`.
pub fn binomial_remainder_bound(m: f64, terms: usize) -> f64 {
    let a = 0.5 * m;
    if a.fract() == 0.0 && (a as usize) < terms {
        return 0.0;
    }
    // |C(a, s)| ~ s^{−a−1}/|Γ(−a)|; sum explicitly, then close with the
    // integral of the asymptotic tail.
    let mut c = binomial(a, terms).abs();
    let mut sum = 0.0;
    let mut s = terms;
    let stop = terms + 1_000_000;
    while s < stop {
        sum += c;
        c *= ((s as f64 - a) / (s as f64 + 1.0)).abs();
        s += 1;
    }
    // remaining terms behave like c·(s'/s)^{−a−1}
    sum + c * s as f64 / a
}

/// The binomial-series difference `Σ_{s<terms} (−1)^s C(m/2, s) (T^t)^s f`,
/// built by repeated spatial application of the translation operator.
pub fn binomial_difference_series(
    f: &RadialProfile,
    t: f64,
    m: f64,
    terms: usize,
) -> Result<RadialProfile> {
    if !(m.is_finite() && m > 0.0) {
        return Err(invalid(format!("difference order must be positive, got {m}")));
    }
    let a = 0.5 * m;
    let view = SpectralView::new(f)?;
    let jt = RadialSymbol::Translation { t }.values(view.lambda(), view.frequencies());
    let mut acc = f.samples().to_vec();
    let mut current = f.clone();
    for s in 1..terms {
        let c = binomial(a, s);
        if c == 0.0 && a.fract() == 0.0 {
            break;
        }
        // one translation step: transform, multiply, transform back
        let step = SpectralView::new_unchecked(&current);
        current = step.apply(&jt);
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        for (x, y) in acc.iter_mut().zip(current.samples()) {
            *x += sign * c * y;
        }
    }
    Ok(Profile::from_parts(*f.params(), Arc::clone(f.grid()), acc, None))
}

impl SpectralView {
    /// Like [`SpectralView::new`] without the decay check; for iterates of
    /// an operator applied to an already checked profile.
    fn new_unchecked(f: &RadialProfile) -> Self {
        let grid = f.grid();
        let w = grid.measure_weights(f.params());
        let g = transform_vector(grid, f.params().lambda(), &w, f.samples());
        let spectrum = Profile::from_parts(*f.params(), Arc::new(grid.dual()), g, None);
        Self::from_pair(f.clone(), spectrum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{make_grid, weighted_lp_distance, weighted_lp_norm, WeightParams};

    fn gaussian(lambda: f64) -> RadialProfile {
        let grid = Arc::new(make_grid(40.0, 64, 64).unwrap());
        RadialProfile::from_fn(WeightParams::new(lambda).unwrap(), grid, |r| (-0.5 * r * r).exp())
            .unwrap()
    }

    #[test]
    fn cutoff_shape() {
        assert_eq!(smooth_cutoff(0.3), 1.0);
        assert_eq!(smooth_cutoff(1.5), 0.0);
        let v = smooth_cutoff(0.75);
        let h = |u: f64| (-1.0 / u).exp();
        assert!((v - h(0.5) / (h(0.5) + h(0.5))).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=100 {
            let x = smooth_cutoff(0.5 + 0.005 * i as f64);
            assert!(x <= prev + 1e-16);
            prev = x;
        }
    }

    #[test]
    fn symbol_json_shape() {
        let s = RadialSymbol::Difference { t: 0.5, m: 3.0 };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"kind":"difference","params":{"t":0.5,"m":3.0}}"#);
        let back: RadialSymbol = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        let c: RadialSymbol =
            serde_json::from_str(r#"{"kind":"custom","params":{"table":[[0,1],[2,0]]}}"#).unwrap();
        assert_eq!(c.values(0.0, &[1.0, 5.0]), vec![0.5, 0.0]);
    }

    #[test]
    fn laplacian_of_gaussian() {
        let f = gaussian(0.7);
        let d = f.params().dim();
        let g = fractional_laplacian(&f, 2.0).unwrap();
        let err = g
            .grid()
            .nodes()
            .iter()
            .zip(g.samples())
            .map(|(r, v)| (v - (d - r * r) * (-0.5 * r * r).exp()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn difference_two_is_one_minus_translation() {
        let f = gaussian(1.5);
        let d = fractional_difference(&f, 1.0, 2.0).unwrap();
        let t = translation(&f, 1.0).unwrap();
        let o = f.combine(1.0, &t, -1.0).unwrap();
        assert!(weighted_lp_distance(&d, &o, 2.0).unwrap() < 1e-12);
        let s = binomial_difference_series(&f, 1.0, 4.0, 64).unwrap();
        let d4 = fractional_difference(&f, 1.0, 4.0).unwrap();
        assert!(weighted_lp_distance(&s, &d4, 2.0).unwrap() < 1e-12);
    }

    #[test]
    fn translation_contracts() {
        let f = gaussian(0.2);
        let n = weighted_lp_norm(&f, 2.0).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let g = translation(&f, t).unwrap();
            assert!(weighted_lp_norm(&g, 2.0).unwrap() <= n * (1.0 + 1e-8));
        }
    }

    #[test]
    fn remainder_bound_decays() {
        assert_eq!(binomial_remainder_bound(4.0, 64), 0.0);
        let b1 = binomial_remainder_bound(1.0, 64);
        let b3 = binomial_remainder_bound(3.0, 64);
        assert!(b1 > 0.0 && b1 < 0.1, "{b1}");
        assert!(b3 < b1);
    }
}
