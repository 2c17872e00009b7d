//! One Besov norm computed through every characterization.

use std::sync::Arc;

use dunkl::besov::{ApproximantChoice, BesovMethod, BesovParams};
use dunkl::measure::{make_grid, RadialProfile, WeightParams};

fn main() -> dunkl::Result<()> {
    let params = WeightParams::new(0.7)?;
    let grid = Arc::new(make_grid(40.0, 64, 64)?);
    let f = RadialProfile::from_fn(params, grid, |r| (-r).exp())?;
    let a = f.analysis()?;
    for theta in [1.0, 2.0, f64::INFINITY] {
        let bp = BesovParams::new(0.5, 3.0, theta, 1.5)?;
        println!("s = 0.5, p = 3, θ = {theta}");
        let def = a.besov_norm(&bp, BesovMethod::Definition, ApproximantChoice::NearBest)?.value;
        for m in BesovMethod::ALL {
            let v = a.besov_norm(&bp, m, ApproximantChoice::NearBest)?;
            let flag = if v.surrogate { "  surrogate" } else { "" };
            println!("  {:<18} {:>12.5e}  ratio {:.3}{flag}", m.name(), v.value, v.value / def);
        }
    }
    println!("Lipschitz norm s = 0.5, p = 3: {:.5e}", a.lipschitz_norm(0.5, 3.0, 10)?);
    Ok(())
}
