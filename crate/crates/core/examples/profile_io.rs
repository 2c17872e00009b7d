//! Writing a spectrum to CSV with its JSON sidecar and reading it back.

use std::sync::Arc;

use dunkl::io::{read_profile, sidecar_path, write_profile};
use dunkl::measure::{make_grid, RadialProfile, Spectral, WeightParams};
use dunkl::transform::dunkl_transform_radial;

fn main() -> dunkl::Result<()> {
    let params = WeightParams::new(1.5)?;
    let grid = Arc::new(make_grid(40.0, 32, 64)?);
    let f = RadialProfile::from_fn(params, grid, |r| (-r.powi(4)).exp())?;
    let g = dunkl_transform_radial(&f)?;
    let path = std::env::temp_dir().join("dunkl-spectrum.csv");
    write_profile(&g, &path)?;
    println!("{}", std::fs::read_to_string(sidecar_path(&path))?);
    let back = read_profile::<Spectral>(&path)?;
    println!(
        "read {} samples back, identical: {}",
        back.samples().len(),
        back.samples() == g.samples()
    );
    Ok(())
}
