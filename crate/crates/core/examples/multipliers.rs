//! Translation, fractional Laplacian, fractional differences and the dyadic
//! cutoffs, all as spectral multipliers.

use std::sync::Arc;

use dunkl::measure::{
    make_grid, weighted_lp_distance, weighted_lp_norm, RadialProfile, WeightParams,
};
use dunkl::multipliers::{
    band_projection, binomial_difference_series, binomial_remainder_bound, fractional_difference,
    fractional_laplacian, translation, BandKind,
};

fn main() -> dunkl::Result<()> {
    let params = WeightParams::new(0.7)?;
    let grid = Arc::new(make_grid(40.0, 64, 64)?);
    let f = RadialProfile::from_fn(params, grid, |r| (-r * r / 2.0).exp())?;

    for t in [0.1, 1.0, 10.0] {
        let tf = translation(&f, t)?;
        let ratios: Vec<String> = [1.0, 1.5, 2.0, 3.0]
            .iter()
            .map(|&p| Ok(format!("{:.6}", weighted_lp_norm(&tf, p)? / weighted_lp_norm(&f, p)?)))
            .collect::<dunkl::Result<_>>()?;
        println!("‖T^{t} f‖_p / ‖f‖_p for p = 1, 1.5, 2, 3: {}", ratios.join(", "));
    }

    let lap = fractional_laplacian(&f, 2.0)?;
    let d = params.dim();
    let sup = lap
        .grid()
        .nodes()
        .iter()
        .zip(lap.samples())
        .map(|(r, v)| (v - (d - r * r) * (-r * r / 2.0).exp()).abs())
        .fold(0.0, f64::max);
    println!("(−Δ) f vs (d_k − r²) e^{{−r²/2}}: sup error {sup:.2e}");

    for m in [1.0, 2.0, 3.0, 4.0] {
        let spectral = fractional_difference(&f, 1.0, m)?;
        let series = binomial_difference_series(&f, 1.0, m, 64)?;
        println!(
            "m = {m}: multiplier vs 64-term series {:.2e} (remainder bound {:.2e})",
            weighted_lp_distance(&spectral, &series, 2.0)?,
            binomial_remainder_bound(m, 64)
        );
    }

    let low = band_projection(&f, 2, BandKind::Eta)?;
    println!(
        "η_2 f has band limit {:?}; ‖f − η_2 f‖_2 = {:.3e}",
        low.band_limit(),
        weighted_lp_distance(&low, &f, 2.0)?
    );
    Ok(())
}
