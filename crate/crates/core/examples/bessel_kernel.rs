//! Normalized Bessel function and the rank-one Dunkl kernel.

use dunkl::specfun::{dunkl_kernel_rank1, normalized_bessel, one_minus_bessel, BesselOrder};

fn main() -> dunkl::Result<()> {
    for lambda in [-0.25, 0.5, 3.0] {
        let order = BesselOrder::new(lambda)?;
        println!("λ = {lambda}");
        for t in [1e-4, 1.0, 10.0, 100.0] {
            println!(
                "  j({t:>7}) = {:+.15e}   1 − j = {:.15e}",
                normalized_bessel(order, t)?,
                one_minus_bessel(order, t)?
            );
        }
    }
    // λ = 1/2 is the cosine; the kernel picks up the sine as imaginary part
    let e = dunkl_kernel_rank1(1.0, 2.0, 1.5)?;
    println!("e_1(2, 1.5) = {:.12} + {:.12}i, |e| = {:.12}", e.re, e.im, e.norm());
    Ok(())
}
