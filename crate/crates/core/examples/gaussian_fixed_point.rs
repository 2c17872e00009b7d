//! The Gaussian is a fixed point of the transform; the round trip is the
//! identity.

use std::sync::Arc;
use std::time::Instant;

use dunkl::measure::{
    make_grid, weighted_lp_distance, weighted_lp_norm, RadialProfile, WeightParams,
};
use dunkl::transform::{dunkl_transform_radial, inverse_dunkl_transform_radial};

fn main() -> dunkl::Result<()> {
    let grid = Arc::new(make_grid(40.0, 64, 64)?);
    for lambda in [0.2, 0.7, 1.5, 3.0] {
        let params = WeightParams::new(lambda)?;
        let f = RadialProfile::from_fn(params, Arc::clone(&grid), |r| (-r * r / 2.0).exp())?;
        let start = Instant::now();
        let g = dunkl_transform_radial(&f)?;
        let elapsed = start.elapsed();
        let sup = g
            .grid()
            .nodes()
            .iter()
            .zip(g.samples())
            .map(|(s, v)| (v - (-s * s / 2.0).exp()).abs())
            .fold(0.0, f64::max);
        let back = inverse_dunkl_transform_radial(&g)?;
        let rel = weighted_lp_distance(&back, &f, 2.0)? / weighted_lp_norm(&f, 2.0)?;
        println!("λ = {lambda}: sup error {sup:.2e}, round trip {rel:.2e}, {elapsed:.2?}");
    }
    Ok(())
}
