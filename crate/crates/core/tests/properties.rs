//! Invariants checked on randomized inputs.

use std::sync::{Arc, OnceLock};

use dunkl::harness::corpus::gaussian_mixture;
use dunkl::harness::report::{read_csv, write_csv};
use dunkl::harness::GridSpec;
use dunkl::inequalities::{Cell, Evaluation, RatioSample, TheoremId};
use dunkl::measure::{
    make_grid, weighted_lp_norm, weighted_lp_norm_on_grid, RadialGrid, RadialProfile, WeightParams,
};
use dunkl::multipliers::{apply_symbol, apply_symbol_product, translation, RadialSymbol};
use dunkl::smoothness::{near_best_approx, realization_level, Analysis, Mult};
use proptest::prelude::*;
use proptest::sample::select;

fn grid() -> Arc<RadialGrid> {
    static GRID: OnceLock<Arc<RadialGrid>> = OnceLock::new();
    Arc::clone(GRID.get_or_init(|| Arc::new(make_grid(40.0, 64, 64).unwrap())))
}

fn mixture(lambda: f64, seed: u64) -> RadialProfile {
    gaussian_mixture(WeightParams::new(lambda).unwrap(), grid(), 4, seed).unwrap()
}

/// `e^{-r}` at `λ = 0.7`, analysed once and shared.
fn stretched() -> &'static Analysis {
    static A: OnceLock<Analysis> = OnceLock::new();
    A.get_or_init(|| {
        let f = RadialProfile::from_fn(WeightParams::new(0.7).unwrap(), grid(), |r| (-r).exp())
            .unwrap();
        Analysis::new(&f).unwrap()
    })
}

fn sup_diff(a: &RadialProfile, b: &RadialProfile) -> f64 {
    a.samples().iter().zip(b.samples()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Cutoffs and non-even powers leave intermediates with sub-exponential
    // decay, which the sequential route rightly refuses to transform again.
    // Small steps shrink an intermediate toward the rounding floor of its
    // input, which the relative tail check also refuses.
    #[test]
    fn multipliers_compose_and_commute(
        seed in 0u64..1000, t in 0.05f64..3.0, u in 0.5f64..3.0, m in select(vec![2.0, 4.0]),
    ) {
        let f = mixture(0.7, seed);
        let a = RadialSymbol::Translation { t };
        let b = RadialSymbol::Difference { t: u, m };
        let c = RadialSymbol::FracLaplacian { r: 2.0 };
        let joint = apply_symbol_product(&f, &[a.clone(), b.clone(), c.clone()]).unwrap();
        let abc = apply_symbol(&apply_symbol(&apply_symbol(&f, &a).unwrap(), &b).unwrap(), &c).unwrap();
        let lap = apply_symbol(&f, &c).unwrap();
        let cba = apply_symbol(&apply_symbol(&lap, &b).unwrap(), &a).unwrap();
        // rounding scales with the largest intermediate, not the output
        let scale = lap.max_abs().max(joint.max_abs());
        prop_assert!(sup_diff(&abc, &joint) < 1e-10 * scale, "{}", sup_diff(&abc, &joint) / scale);
        prop_assert!(sup_diff(&cba, &joint) < 1e-10 * scale, "{}", sup_diff(&cba, &joint) / scale);
    }

    #[test]
    fn translation_is_a_contraction(
        seed in 0u64..1000, lambda in select(vec![0.2, 0.7, 1.5, 3.0]),
        t in 0.0f64..20.0, p in select(vec![1.0, 1.5, 2.0, 3.0]),
    ) {
        let f = mixture(lambda, seed);
        let tf = translation(&f, t).unwrap();
        let ratio = weighted_lp_norm(&tf, p).unwrap() / weighted_lp_norm(&f, p).unwrap();
        prop_assert!(ratio <= 1.0 + 1e-6, "ratio {}", ratio);
    }

    #[test]
    fn difference_norm_is_bounded_in_l2(seed in 0u64..1000, t in 0.01f64..10.0, m in 0.2f64..6.0) {
        let f = mixture(1.5, seed);
        let d = dunkl::multipliers::fractional_difference(&f, t, m).unwrap();
        let lhs = weighted_lp_norm_on_grid(&d, 2.0).unwrap();
        prop_assert!(lhs <= f64::powf(2.0, m / 2.0) * (1.0 + 1e-6) * weighted_lp_norm(&f, 2.0).unwrap());
    }

    #[test]
    fn modulus_dominates_its_top_step_and_grows_along_the_lattice(
        delta in 0.01f64..1.0, k in 1i32..8, m in 0.5f64..3.0, p in select(vec![1.5, 2.0, 3.0]),
    ) {
        let a = stretched();
        let w = a.modulus(m, delta, p).unwrap();
        let top = a.norm(Mult::Difference { t: delta, m }, p).unwrap();
        prop_assert!(w >= top);
        let wider = a.modulus(m, delta * f64::powf(2.0, k as f64 / 4.0), p).unwrap();
        prop_assert!(wider >= w, "{} < {}", wider, w);
    }

    #[test]
    fn near_best_error_is_nonincreasing(j in -1i32..6, p in select(vec![1.5, 2.0, 3.0])) {
        let f = stretched().profile();
        let a = near_best_approx(f, j, p).unwrap().error;
        let b = near_best_approx(f, j + 1, p).unwrap().error;
        prop_assert!(b <= a + 1e-12);
    }

    #[test]
    fn realization_level_is_the_least_dyadic_cover(t in 1e-4f64..1e3) {
        let j = realization_level(t);
        let x = 1.0 / t;
        prop_assert!(f64::powi(2.0, j) >= x * (1.0 - 1e-12));
        prop_assert!(f64::powi(2.0, j - 1) < x);
    }
}

proptest! {
    #[test]
    fn cells_validate_without_panicking(
        id in select(TheoremId::ALL.to_vec()),
        p in proptest::option::of(select(vec![0.5, 1.0, 1.5, 2.0, 3.0, f64::INFINITY])),
        q in proptest::option::of(select(vec![1.0, 2.0, 2.5, 4.0])),
        r in proptest::option::of(0.1f64..4.0),
        n in proptest::option::of(select(vec![0.5, 1.0, 2.0, 7.0, 64.0])),
    ) {
        let cell = Cell { p, q, r, n_or_delta: n, ..Cell::default() };
        // either accepted or rejected with an error, and serde-stable
        let _ = cell.validate(id);
        let json = serde_json::to_string(&cell).unwrap();
        prop_assert_eq!(serde_json::from_str::<Cell>(&json).unwrap(), cell);
    }

    #[test]
    fn grid_spec_parses_its_own_rendering(radius in 1.0f64..500.0, panels in 1usize..200, nodes in 2usize..128) {
        let g = GridSpec::parse(&format!("{radius},{panels},{nodes}")).unwrap();
        prop_assert_eq!(g, GridSpec { radius, panels, nodes_per_panel: nodes });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn csv_rows_round_trip(
        rows in proptest::collection::vec((1e-300f64..1e300, 1e-300f64..1e300, 1.0f64..4.0, any::<bool>()), 1..20),
    ) {
        let samples: Vec<RatioSample> = rows
            .iter()
            .enumerate()
            .map(|(i, &(lhs, rhs, p, surrogate))| {
                let cell = Cell { p: Some(p), q: Some(2.0 * p), ..Cell::default() };
                RatioSample::new(TheoremId::Pitt1, format!("member{i}"), cell, Evaluation { lhs, rhs, surrogate })
                    .unwrap()
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ratios.csv");
        write_csv(&samples, &path).unwrap();
        prop_assert_eq!(read_csv(&path).unwrap(), samples);
    }
}
