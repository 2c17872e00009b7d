//! Forward and inverse Dunkl transforms of radial profiles, and the rank-one
//! transform through the even/odd split.
//!
//! On radial data the transform is the normalized Hankel transform
//! `g(s) = (2^λΓ(λ+1))^{-1} ∫ f(r) j_λ(rs) r^{2λ+1} dr`, which is its own
//! inverse. Both directions are dense products with the matrix
//! `B_ij = j_λ(P u_i u_j)`, where `u` are the unit nodes of the grid shape
//! and `P = R·S` is the bandwidth product. `B` is symmetric, so the same
//! cached matrix serves forward and inverse transforms on every grid that
//! shares shape and product.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use ndarray::{s, Array1, Array2, ArrayView2, Axis};
use rayon::prelude::*;

use crate::error::{invalid, DunklError, Result};
use crate::measure::{
    Domain, GridShape, Profile, RadialGrid, RadialProfile, SpectralProfile, WeightParams,
};
use crate::specfun::NormalizedBessel;

/// Default byte budget of the kernel cache.
pub const DEFAULT_KERNEL_CACHE_BYTES: usize = 1 << 31;

/// Entries of a weighted sample vector that may be skipped: a trailing block
/// whose absolute sum is below this fraction of the total. Kernel entries are
/// bounded by 1, so the skipped contribution is bounded by the same fraction.
const NEGLIGIBLE_TAIL: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct KernelKey {
    shape: GridShape,
    product: u64,
    lambda: u64,
}

struct CacheEntry {
    cell: Arc<OnceLock<Arc<Array2<f64>>>>,
    last_used: u64,
}

struct KernelCache {
    entries: HashMap<KernelKey, CacheEntry>,
    capacity: usize,
    clock: u64,
}

fn cache() -> &'static Mutex<KernelCache> {
    static CACHE: OnceLock<Mutex<KernelCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(KernelCache {
            entries: HashMap::new(),
            capacity: DEFAULT_KERNEL_CACHE_BYTES,
            clock: 0,
        })
    })
}

/// Sets the byte budget of the kernel cache. Matrices in use stay alive
/// until their last user drops them.
pub fn set_kernel_cache_capacity(bytes: usize) {
    let mut c = cache().lock().expect("kernel cache poisoned");
    c.capacity = bytes;
    evict(&mut c, None);
}

/// Drops every cached kernel matrix.
pub fn clear_kernel_cache() {
    cache().lock().expect("kernel cache poisoned").entries.clear();
}

/// Number of kernel matrices currently cached.
pub fn kernel_cache_len() -> usize {
    let c = cache().lock().expect("kernel cache poisoned");
    c.entries.values().filter(|e| e.cell.get().is_some()).count()
}

fn evict(c: &mut KernelCache, keep: Option<KernelKey>) {
    loop {
        let used: usize = c
            .entries
            .values()
            .filter_map(|e| e.cell.get())
            .map(|m| m.len() * std::mem::size_of::<f64>())
            .sum();
        if used <= c.capacity {
            return;
        }
        let victim = c
            .entries
            .iter()
            .filter(|(k, e)| Some(**k) != keep && e.cell.get().is_some())
            .min_by_key(|(_, e)| e.last_used)
            .map(|(k, _)| *k);
        match victim {
            Some(k) => {
                c.entries.remove(&k);
            }
            None => return,
        }
    }
}

/// The symmetric matrix `j_λ(P u_i u_j)` for `grid` and order `λ`.
fn kernel(grid: &RadialGrid, lambda: f64) -> Arc<Array2<f64>> {
    let key = KernelKey {
        shape: grid.shape(),
        product: grid.bandwidth_product().to_bits(),
        lambda: lambda.to_bits(),
    };
    let cell = {
        let mut c = cache().lock().expect("kernel cache poisoned");
        c.clock += 1;
        let now = c.clock;
        let entry = c
            .entries
            .entry(key)
            .or_insert_with(|| CacheEntry { cell: Arc::new(OnceLock::new()), last_used: now });
        entry.last_used = now;
        Arc::clone(&entry.cell)
    };
    let m = Arc::clone(cell.get_or_init(|| {
        Arc::new(build_kernel(grid.unit_nodes(), grid.bandwidth_product(), lambda))
    }));
    let mut c = cache().lock().expect("kernel cache poisoned");
    evict(&mut c, Some(key));
    m
}

fn build_kernel(u: &[f64], product: f64, lambda: f64) -> Array2<f64> {
    let n = u.len();
    let bessel = NormalizedBessel::new(lambda);
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let a = product * u[i];
        for j in i..n {
            row[j] = bessel.eval(a * u[j]);
        }
    });
    for i in 1..n {
        for j in 0..i {
            data[i * n + j] = data[j * n + i];
        }
    }
    Array2::from_shape_vec((n, n), data).expect("square kernel")
}

/// Length of the prefix of rows of `v` that carries all but a negligible
/// part of its absolute mass.
fn active_prefix(v: ArrayView2<f64>) -> usize {
    let row_mass: Vec<f64> =
        v.axis_iter(Axis(0)).map(|r| r.iter().map(|x| x.abs()).sum()).collect();
    let total: f64 = row_mass.iter().sum();
    if total == 0.0 {
        return 0;
    }
    let mut tail = 0.0;
    let mut end = row_mass.len();
    while end > 0 {
        let next = tail + row_mass[end - 1];
        if next > NEGLIGIBLE_TAIL * total {
            break;
        }
        tail = next;
        end -= 1;
    }
    end
}

/// Applies the transform to several sample columns at once.
///
/// `columns` is `N × B` on `grid` (either variable); `weights` are the
/// quadrature weights of `dμ_k` on that grid (possibly modified, e.g. to cut
/// the integral at a hard frequency). Returns `N × B` samples on the dual grid.
pub(crate) fn transform_columns(
    grid: &RadialGrid,
    lambda: f64,
    weights: &[f64],
    columns: ArrayView2<f64>,
) -> Array2<f64> {
    let n = grid.len();
    debug_assert_eq!(columns.nrows(), n);
    let mut v = columns.to_owned();
    for (mut row, w) in v.axis_iter_mut(Axis(0)).zip(weights) {
        row.mapv_inplace(|x| x * w);
    }
    let end = active_prefix(v.view());
    if end == 0 {
        return Array2::zeros((n, columns.ncols()));
    }
    let b = kernel(grid, lambda);
    b.slice(s![.., ..end]).dot(&v.slice(s![..end, ..]))
}

/// Single-column version of [`transform_columns`].
pub(crate) fn transform_vector(
    grid: &RadialGrid,
    lambda: f64,
    weights: &[f64],
    samples: &[f64],
) -> Vec<f64> {
    let n = grid.len();
    let v: Array1<f64> = samples.iter().zip(weights).map(|(x, w)| x * w).collect();
    let end = active_prefix(v.view().insert_axis(Axis(1)));
    if end == 0 {
        return vec![0.0; n];
    }
    let b = kernel(grid, lambda);
    b.slice(s![.., ..end]).dot(&v.slice(s![..end])).to_vec()
}

fn transform_profile<A: Domain, B: Domain>(f: &Profile<A>) -> Profile<B> {
    let grid = f.grid();
    let weights = grid.measure_weights(f.params());
    let out = transform_vector(grid, f.params().lambda(), &weights, f.samples());
    Profile::from_parts(*f.params(), Arc::new(grid.dual()), out, f.band_limit())
}

/// The Dunkl transform of a radial function: the normalized Hankel
/// transform of order `λ_k`, sampled on the dual grid.
pub fn dunkl_transform_radial(f: &RadialProfile) -> Result<SpectralProfile> {
    f.check_tail()?;
    Ok(transform_profile(f))
}

/// The inverse transform. On radial data it is the same Hankel map.
pub fn inverse_dunkl_transform_radial(g: &SpectralProfile) -> Result<RadialProfile> {
    Ok(transform_profile(g))
}

/// Evaluates the transform at arbitrary frequencies (no cache, one kernel
/// row per frequency). Frequencies above the grid's spectral cap are refused.
pub fn dunkl_transform_at(f: &RadialProfile, freqs: &[f64]) -> Result<Vec<f64>> {
    f.check_tail()?;
    let cap = f.grid().spectral_cap();
    if let Some(&s) = freqs.iter().find(|&&s| s.is_nan() || s < 0.0 || s > cap) {
        if s > cap {
            return Err(DunklError::Resolution { requested: s, cap });
        }
        return Err(invalid(format!("frequency must be ≥ 0, got {s}")));
    }
    let bessel = NormalizedBessel::new(f.params().lambda());
    let m = f.grid().measure_weights(f.params());
    let r = f.grid().nodes();
    Ok(freqs
        .par_iter()
        .map(|&s| {
            r.iter()
                .zip(&m)
                .zip(f.samples())
                .map(|((&ri, wi), fi)| wi * fi * bessel.eval(ri * s))
                .sum()
        })
        .collect())
}

fn rank_one_params(f_even: &RadialProfile, f_odd: &RadialProfile, k: f64) -> Result<WeightParams> {
    let params = WeightParams::rank_one(k)?;
    for f in [f_even, f_odd] {
        if (f.params().lambda() - params.lambda()).abs() > 1e-14 {
            return Err(invalid(format!(
                "profile has λ_k = {} but multiplicity {k} needs λ_k = {}",
                f.params().lambda(),
                params.lambda()
            )));
        }
    }
    f_even.check_compatible_grid(f_odd)?;
    Ok(params)
}

impl<D: Domain> Profile<D> {
    fn check_compatible_grid(&self, other: &Self) -> Result<()> {
        if self.grid().same_layout(other.grid()) {
            Ok(())
        } else {
            Err(DunklError::GridMismatch("even and odd parts live on different grids".into()))
        }
    }
}

/// Rank-one transform of `f = f_even + f_odd` on the line with multiplicity
/// `k`. Profiles hold the restrictions to `x > 0`.
///
/// Returns `(g_e, g_o)` with `F_k f(s) = g_e(s) − i·g_o(s)` for `s > 0`; `g_e`
/// is the order-λ transform of `f_even` and `g_o(s) = s·F_{λ+1}[f_odd(r)/r](s)`
/// with the normalized order-(λ+1) transform. The `1/(2(λ+1))` of the kernel
/// is absorbed by that normalization.
pub fn dunkl_transform_rank1(
    f_even: &RadialProfile,
    f_odd: &RadialProfile,
    k: f64,
) -> Result<(SpectralProfile, SpectralProfile)> {
    let params = rank_one_params(f_even, f_odd, k)?;
    f_even.check_tail()?;
    f_odd.check_tail()?;
    let even = dunkl_transform_radial(f_even)?;
    let raised = params.raised();
    let grid = f_odd.grid();
    let h: Vec<f64> = grid.nodes().iter().zip(f_odd.samples()).map(|(r, v)| v / r).collect();
    let weights = grid.measure_weights(&raised);
    let g = transform_vector(grid, raised.lambda(), &weights, &h);
    let dual = Arc::new(grid.dual());
    let odd: Vec<f64> = dual.nodes().iter().zip(&g).map(|(s, v)| s * v).collect();
    Ok((even, Profile::from_parts(*f_odd.params(), dual, odd, f_odd.band_limit())))
}

/// Inverse of [`dunkl_transform_rank1`]: recovers `(f_even, f_odd)` from
/// `(g_e, g_o)`.
pub fn inverse_dunkl_transform_rank1(
    g_even: &SpectralProfile,
    g_odd: &SpectralProfile,
    k: f64,
) -> Result<(RadialProfile, RadialProfile)> {
    let params = WeightParams::rank_one(k)?;
    for g in [g_even, g_odd] {
        if (g.params().lambda() - params.lambda()).abs() > 1e-14 {
            return Err(invalid("spectral parts do not match the multiplicity"));
        }
    }
    g_even.check_compatible_grid(g_odd)?;
    let even = inverse_dunkl_transform_radial(g_even)?;
    let raised = params.raised();
    let grid = g_odd.grid();
    let h: Vec<f64> = grid.nodes().iter().zip(g_odd.samples()).map(|(s, v)| v / s).collect();
    let weights = grid.measure_weights(&raised);
    let f = transform_vector(grid, raised.lambda(), &weights, &h);
    let dual = Arc::new(grid.dual());
    let odd: Vec<f64> = dual.nodes().iter().zip(&f).map(|(r, v)| r * v).collect();
    Ok((even, Profile::from_parts(*g_odd.params(), dual, odd, None)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{make_grid, weighted_lp_distance};

    fn gaussian(lambda: f64) -> RadialProfile {
        let grid = Arc::new(make_grid(40.0, 64, 64).unwrap());
        RadialProfile::from_fn(WeightParams::new(lambda).unwrap(), grid, |r| (-0.5 * r * r).exp())
            .unwrap()
    }

    #[test]
    fn gaussian_is_fixed() {
        let f = gaussian(0.7);
        let g = dunkl_transform_radial(&f).unwrap();
        let err = g
            .grid()
            .nodes()
            .iter()
            .zip(g.samples())
            .map(|(s, v)| (v - (-0.5 * s * s).exp()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
        let back = inverse_dunkl_transform_radial(&g).unwrap();
        let rt =
            back.samples().iter().zip(f.samples()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(rt < 1e-12, "{rt}");
    }

    #[test]
    fn zero_maps_to_zero() {
        let f = gaussian(0.2).scaled(0.0);
        let g = dunkl_transform_radial(&f).unwrap();
        assert!(g.samples().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn undecayed_input_is_refused() {
        let grid = Arc::new(make_grid(5.0, 8, 16).unwrap());
        let f =
            RadialProfile::from_fn(WeightParams::new(0.2).unwrap(), grid, |r| (-r).exp()).unwrap();
        assert!(matches!(dunkl_transform_radial(&f), Err(DunklError::Truncation { .. })));
    }

    #[test]
    fn pointwise_matches_matrix_and_refuses_beyond_cap() {
        let f = gaussian(1.5);
        let v = dunkl_transform_at(&f, &[0.0, 1.0, 3.5]).unwrap();
        for (s, x) in [0.0_f64, 1.0, 3.5].iter().zip(v) {
            assert!((x - (-0.5 * s * s).exp()).abs() < 1e-12);
        }
        assert!(matches!(dunkl_transform_at(&f, &[1000.0]), Err(DunklError::Resolution { .. })));
    }

    #[test]
    fn rank_one_classical_limit() {
        let params = WeightParams::rank_one(0.0).unwrap();
        let grid = Arc::new(make_grid(40.0, 64, 64).unwrap());
        let fe =
            RadialProfile::from_fn(params, Arc::clone(&grid), |x| (-0.5 * x * x).exp()).unwrap();
        let fo = RadialProfile::from_fn(params, grid, |x| x * (-0.5 * x * x).exp()).unwrap();
        let (ge, go) = dunkl_transform_rank1(&fe, &fo, 0.0).unwrap();
        for ((s, a), b) in ge.grid().nodes().iter().zip(ge.samples()).zip(go.samples()) {
            let e = (-0.5 * s * s).exp();
            assert!((a - e).abs() < 1e-10);
            assert!((b - s * e).abs() < 1e-10);
        }
        let (be, bo) = inverse_dunkl_transform_rank1(&ge, &go, 0.0).unwrap();
        let n = weighted_lp_distance(&bo, &fo, 2.0).unwrap();
        assert!(n < 1e-10);
        let n = weighted_lp_distance(&be, &fe, 2.0).unwrap();
        assert!(n < 1e-10);
    }
}
