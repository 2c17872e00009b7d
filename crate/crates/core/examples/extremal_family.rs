//! The spectral-window family whose Kellogg sums grow like `(ln N)^{1/2}`.

use std::sync::Arc;

use dunkl::inequalities::{
    extremal_family, extremal_grid, harmonic_root, kellogg_sum, ExtremalSpectrum,
};
use dunkl::measure::{weighted_lp_norm, WeightParams};

fn main() -> dunkl::Result<()> {
    let params = WeightParams::new(0.7)?;
    let (p, eps) = (1.5, 0.1);
    let q = p / (p - 1.0);
    for n in [4, 8, 16, 32, 64] {
        let ex = ExtremalSpectrum::new(params, n, eps, q)?;
        let sum = ex.kellogg_sum(q);
        println!(
            "N = {n:>2}: Kellogg sum {sum:.4}, ratio to harmonic root {:.4}",
            sum / harmonic_root(n)
        );
    }
    // small N also fits on a spatial grid, which gives a second route to the sum
    let (n, eps) = (2, 0.5);
    let grid = Arc::new(extremal_grid(n, eps)?);
    let f = extremal_family(params, grid, n, eps, p)?;
    let spatial = kellogg_sum(&f.analysis()?, q);
    let windows = ExtremalSpectrum::new(params, n, eps, q)?.kellogg_sum(q);
    println!(
        "spatial f_{n} on {} nodes: ‖f‖_{p} = {:.6}, Kellogg sum {spatial:.6} vs {windows:.6} from the windows",
        f.grid().len(),
        weighted_lp_norm(&f, p)?
    );
    Ok(())
}
