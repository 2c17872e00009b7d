//! Rank-one transform of a non-even function split into even and odd parts.

use std::sync::Arc;

use dunkl::measure::{make_grid, weighted_lp_distance, RadialProfile, WeightParams};
use dunkl::transform::{dunkl_transform_rank1, inverse_dunkl_transform_rank1};

fn main() -> dunkl::Result<()> {
    let k = 1.2;
    let params = WeightParams::rank_one(k)?;
    let grid = Arc::new(make_grid(40.0, 64, 64)?);
    // f(x) = (1 + x) e^{-x²/2}
    let even = RadialProfile::from_fn(params, Arc::clone(&grid), |r| (-r * r / 2.0).exp())?;
    let odd = RadialProfile::from_fn(params, Arc::clone(&grid), |r| r * (-r * r / 2.0).exp())?;
    let (ge, go) = dunkl_transform_rank1(&even, &odd, k)?;
    // F_k f(s) = e^{-s²/2}(1 − i s): both parts are exact
    let worst = ge
        .grid()
        .nodes()
        .iter()
        .zip(ge.samples().iter().zip(go.samples()))
        .map(|(s, (e, o))| {
            let g = (-s * s / 2.0).exp();
            (e - g).abs().max((o - s * g).abs())
        })
        .fold(0.0, f64::max);
    println!("k = {k}: sup error of both parts {worst:.2e}");
    let (fe, fo) = inverse_dunkl_transform_rank1(&ge, &go, k)?;
    println!(
        "round trip: even {:.2e}, odd {:.2e}",
        weighted_lp_distance(&fe, &even, 2.0)?,
        weighted_lp_distance(&fo, &odd, 2.0)?
    );
    Ok(())
}
