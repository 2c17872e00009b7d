//! Test-function corpus.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DunklError, Result};
use crate::harness::config::{GeneratorSpec, GridSpec};
use crate::inequalities::ExtremalSpectrum;
use crate::measure::{make_grid, RadialGrid, RadialProfile, SpectralProfile, WeightParams};
use crate::transform::inverse_dunkl_transform_radial;

/// Spatial radius times band limit for band-limited members. Their spectral
/// bump is only `C^∞`, so the spatial profile decays slower than any
/// exponential; this radius brings it below the tail tolerance.
const BUMP_RADIUS_TIMES_SIGMA: f64 = 960.0;

/// Spatial radius times spectral radius for band-limited members. Equal to
/// the default grid's `40 · 40`, so all members share one kernel per `λ`.
const BUMP_BANDWIDTH_PRODUCT: f64 = 1600.0;

#[derive(Debug, Clone)]
pub enum Member {
    Profile {
        id: String,
        f: RadialProfile,
    },
    /// Represented by its spectral windows; see [`ExtremalSpectrum`].
    Extremal {
        id: String,
        params: WeightParams,
        eps: f64,
        max_n: usize,
    },
}

impl Member {
    pub fn id(&self) -> &str {
        match self {
            Member::Profile { id, .. } | Member::Extremal { id, .. } => id,
        }
    }

    pub fn profile(&self) -> Option<&RadialProfile> {
        match self {
            Member::Profile { f, .. } => Some(f),
            Member::Extremal { .. } => None,
        }
    }

    /// The extremal spectrum with `N = n`, normalized in `L^{p'}`.
    pub fn extremal(&self, n: usize, norm_exponent: f64) -> Option<Result<ExtremalSpectrum>> {
        match self {
            Member::Extremal { params, eps, .. } => {
                Some(ExtremalSpectrum::new(*params, n, *eps, norm_exponent))
            }
            Member::Profile { .. } => None,
        }
    }
}

/// Name of a generator, without the weight parameter.
pub fn generator_name(g: &GeneratorSpec, seed: u64) -> String {
    match g {
        GeneratorSpec::Gaussian { scale } => format!("gaussian({scale})"),
        GeneratorSpec::SuperGaussian => "super_gaussian".into(),
        GeneratorSpec::Stretched => "stretched".into(),
        GeneratorSpec::BandlimitedBump { sigma } => format!("bandlimited_bump({sigma})"),
        GeneratorSpec::GaussianMixture { terms } => {
            format!("gaussian_mixture({terms},seed={seed})")
        }
        GeneratorSpec::Extremal { eps, max_n } => format!("extremal(eps={eps},max_n={max_n})"),
    }
}

/// Smooth bump supported in `[σ/2, σ]` with peak 1.
pub fn spectral_bump(sigma: f64, s: f64) -> f64 {
    let u = (s - 0.5 * sigma) / (0.5 * sigma);
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        (4.0 - 1.0 / (u * (1.0 - u))).exp()
    }
}

/// Grid used for `bandlimited_bump(σ)` with the given panel layout.
pub fn bump_grid(sigma: f64, grid: &GridSpec) -> Result<RadialGrid> {
    let radius = BUMP_RADIUS_TIMES_SIGMA / sigma;
    make_grid(radius, grid.panels, grid.nodes_per_panel)?
        .with_dual_radius(BUMP_BANDWIDTH_PRODUCT / radius)
}

/// `F^{-1}` of [`spectral_bump`], band limit `σ`.
pub fn bandlimited_bump(
    params: WeightParams,
    sigma: f64,
    grid: &GridSpec,
) -> Result<RadialProfile> {
    let g = Arc::new(bump_grid(sigma, grid)?);
    let dual = Arc::new(g.dual());
    let spectrum = SpectralProfile::from_fn(params, dual, |s| spectral_bump(sigma, s))?;
    let f = inverse_dunkl_transform_radial(&spectrum)?;
    f.with_band_limit(sigma)
}

/// Random Gaussian mixture; the same coefficients for every `λ`.
pub fn gaussian_mixture(
    params: WeightParams,
    grid: Arc<RadialGrid>,
    terms: usize,
    seed: u64,
) -> Result<RadialProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> =
        (0..terms).map(|_| (rng.random_range(-1.0..=1.0), rng.random_range(0.25..=2.0))).collect();
    RadialProfile::from_fn(params, grid, |r| {
        coeffs.iter().map(|(c, a)| c * (-a * r * r).exp()).sum()
    })
}

/// Builds every member of the corpus for one `λ`. Ids carry `@lambda=…`.
pub fn build_corpus(
    spec: &[GeneratorSpec],
    lambda: f64,
    grid: &GridSpec,
    seed: u64,
) -> Result<Vec<Member>> {
    let params = WeightParams::new(lambda)?;
    let base = Arc::new(grid.build()?);
    spec.iter()
        .enumerate()
        .map(|(i, g)| {
            let member_seed = seed.wrapping_add(i as u64);
            let id = format!("{}@lambda={lambda}", generator_name(g, member_seed));
            let tagged = |e: DunklError| DunklError::Sweep {
                theorem: "corpus".into(),
                corpus: id.clone(),
                cell: String::new(),
                source: Box::new(e),
            };
            let f = match g {
                GeneratorSpec::Gaussian { scale } => {
                    RadialProfile::from_fn(params, Arc::clone(&base), |r| (-scale * r * r).exp())
                }
                GeneratorSpec::SuperGaussian => {
                    RadialProfile::from_fn(params, Arc::clone(&base), |r| (-r.powi(4)).exp())
                }
                GeneratorSpec::Stretched => {
                    RadialProfile::from_fn(params, Arc::clone(&base), |r| (-r).exp())
                }
                GeneratorSpec::BandlimitedBump { sigma } => bandlimited_bump(params, *sigma, grid),
                GeneratorSpec::GaussianMixture { terms } => {
                    gaussian_mixture(params, Arc::clone(&base), *terms, member_seed)
                }
                GeneratorSpec::Extremal { eps, max_n } => {
                    return Ok(Member::Extremal { id, params, eps: *eps, max_n: *max_n });
                }
            }
            .map_err(tagged)?;
            Ok(Member::Profile { id, f })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::weighted_integral;

    #[test]
    fn bump_support() {
        assert_eq!(spectral_bump(1.0, 0.5), 0.0);
        assert_eq!(spectral_bump(1.0, 1.0), 0.0);
        assert!((spectral_bump(1.0, 0.75) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bandlimited_member_decays() {
        for lambda in [0.2, 3.0] {
            for sigma in [1.0, 4.0] {
                let f = bandlimited_bump(
                    WeightParams::new(lambda).unwrap(),
                    sigma,
                    &GridSpec::default(),
                )
                .unwrap();
                assert!(f.tail_flag(), "λ={lambda} σ={sigma}: {:?}", f.tail());
            }
        }
    }

    #[test]
    fn gaussian_member_is_normalized() {
        let c =
            build_corpus(&[GeneratorSpec::Gaussian { scale: 0.5 }], 0.7, &GridSpec::default(), 0)
                .unwrap();
        let v = weighted_integral(c[0].profile().unwrap()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        assert_eq!(c[0].id(), "gaussian(0.5)@lambda=0.7");
    }
}
