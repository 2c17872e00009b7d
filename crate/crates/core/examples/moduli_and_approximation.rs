//! Moduli of smoothness, best and near-best approximation, and the
//! realization of the K-functional.

use std::sync::Arc;

use dunkl::measure::{make_grid, weighted_lp_norm_on_grid, RadialProfile, WeightParams};
use dunkl::multipliers::fractional_difference;
use dunkl::smoothness::{best_approx_l2, near_best_approx, realization_level};

fn main() -> dunkl::Result<()> {
    let params = WeightParams::new(1.5)?;
    let grid = Arc::new(make_grid(40.0, 64, 64)?);
    let f = RadialProfile::from_fn(params, grid, |r| (-r).exp())?;
    let a = f.analysis()?;

    println!("{:>8} {:>12} {:>12} {:>12}", "δ", "ω_2(δ)_3", "‖Δ_δ f‖_3", "R*_2(δ)_3");
    for i in 0..6 {
        let delta = f64::powi(2.0, -i);
        // the difference of a kinked profile decays only algebraically
        let diff = weighted_lp_norm_on_grid(&fractional_difference(&f, delta, 2.0)?, 3.0)?;
        println!(
            "{delta:>8} {:>12.4e} {diff:>12.4e} {:>12.4e}",
            a.modulus(2.0, delta, 3.0)?,
            a.k_functional_realization(delta, 2.0, 3.0)?
        );
    }
    println!("realization level for δ = 0.3: {}", realization_level(0.3));

    for j in 1..6 {
        let sigma = f64::powi(2.0, j - 1);
        let best = best_approx_l2(&f, sigma)?;
        let near = near_best_approx(&f, j, 2.0)?;
        println!(
            "j = {j}: E_{sigma}(f)_2 = {:.4e}, ‖f − η_j f‖_2 = {:.4e}",
            best.error, near.error
        );
    }
    Ok(())
}
