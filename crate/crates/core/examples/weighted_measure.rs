//! Composite Gauss–Legendre grid and the normalized power-weight measure.

use std::sync::Arc;

use dunkl::measure::{make_grid, weighted_integral, weighted_lp_norm, RadialProfile, WeightParams};

fn main() -> dunkl::Result<()> {
    let grid = Arc::new(make_grid(40.0, 64, 64)?);
    println!(
        "{} nodes on [0, {}], spectral radius {}",
        grid.len(),
        grid.radius(),
        grid.dual_radius()
    );
    for lambda in [0.2, 0.7, 1.5, 3.0] {
        let params = WeightParams::new(lambda)?;
        let f = RadialProfile::from_fn(params, Arc::clone(&grid), |r| (-r * r / 2.0).exp())?;
        // the measure is normalized so that e^{-r²/2} integrates to one
        println!(
            "λ = {lambda}: d_k = {}, ∫f = {:.15}, ‖f‖_3 = {:.12}",
            params.dim(),
            weighted_integral(&f)?,
            weighted_lp_norm(&f, 3.0)?
        );
    }
    Ok(())
}
