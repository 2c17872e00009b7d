//! Normalized Bessel values against frozen 40-digit references, plus
//! bound and symmetry properties of the kernels.

#![allow(clippy::excessive_precision)] // frozen references keep every mpmath digit

use dunkl::specfun::{
    bessel_j, dunkl_kernel_rank1, gamma, ln_gamma, normalized_bessel, one_minus_bessel, BesselOrder,
};
use proptest::prelude::*;

/// `(λ, t, j_λ(t))` from mpmath at 40 digits via `2^λ Γ(λ+1) t^{-λ} J_λ(t)`.
const REFERENCE: &[(f64, f64, f64)] = &[
    (-0.4, 0.3, 0.96276291247031599189),
    (-0.4, 5.0, 0.092985685088992240553),
    (-0.4, 17.0, -0.28796836276693266505),
    (-0.4, 45.0, 0.40168121608561790703),
    (-0.4, 250.0, 0.044593740433527840089),
    (-0.4, 10000.0, -0.35427635440988662069),
    (0.2, 0.3, 0.981345656262174631),
    (0.2, 5.0, -0.20135177930686677969),
    (0.2, 17.0, -0.11378736601669439905),
    (0.2, 45.0, 0.058380485291120636895),
    (0.2, 250.0, -0.01332941501710743808),
    (0.2, 10000.0, -0.00093970281150314516107),
    (0.7, 0.3, 0.98681974129027694958),
    (0.7, 5.0, -0.17111151032222365765),
    (0.7, 17.0, -0.032761853906944968162),
    (0.7, 45.0, 0.0079327628731968733875),
    (0.7, 250.0, -0.0015575816074423120231),
    (0.7, 10000.0, 6.6518954373776009458e-8),
    (1.5, 0.3, 0.99102888040641880206),
    (1.5, 5.0, -0.057053644847502474989),
    (1.5, 17.0, 0.0022693136098092351845),
    (1.5, 45.0, -0.00075024151349016355217),
    (1.5, 250.0, -0.000011753780033444441509),
    (1.5, 10000.0, 2.8563744204603780781e-8),
    (3.0, 0.3, 0.99438764044239310359),
    (3.0, 5.0, 0.14009519255564812587),
    (3.0, 17.0, 0.0013182714240507378636),
    (3.0, 45.0, -0.000020296613320732824297),
    (3.0, 250.0, 1.3418604732892414437e-7),
    (3.0, 10000.0, -1.749413759804238903e-13),
    (12.5, 0.3, 0.99833462581129964276),
    (12.5, 5.0, 0.62458685240295136622),
    (12.5, 17.0, 0.00016598403498028137558),
    (12.5, 45.0, 9.6332293002736983979e-10),
    (12.5, 250.0, -4.5107396251164361874e-19),
    (12.5, 10000.0, -2.4747847763475618023e-40),
];

fn ord(l: f64) -> BesselOrder {
    BesselOrder::new(l).unwrap()
}

#[test]
fn normalized_bessel_matches_reference() {
    for &(l, t, want) in REFERENCE {
        let got = normalized_bessel(ord(l), t).unwrap();
        // the error of an oscillating function scales with its envelope, not
        // its value near a zero; cancellation in the ascending series adds
        // an absolute floor
        let envelope = f64::min(1.0, t.powf(-l - 0.5)).max(want.abs());
        assert!((got - want).abs() <= 2e-13 * envelope + 5e-15, "λ={l} t={t}: {got:e} vs {want:e}");
    }
}

#[test]
fn one_minus_is_consistent_away_from_zero() {
    for &(l, t, want) in REFERENCE {
        let got = one_minus_bessel(ord(l), t).unwrap();
        assert!((got - (1.0 - want)).abs() < 2e-13, "λ={l} t={t}");
    }
}

#[test]
fn half_integer_orders_are_elementary() {
    // j_{1/2}(t) = sin t / t and j_{3/2}(t) = 3(sin t − t cos t)/t³
    for t in [0.1, 1.0, 7.5, 30.0, 300.0] {
        let j12 = normalized_bessel(ord(0.5), t).unwrap();
        let j32 = normalized_bessel(ord(1.5), t).unwrap();
        assert!((j12 - t.sin() / t).abs() < 1e-14, "t={t}");
        assert!((j32 - 3.0 * (t.sin() - t * t.cos()) / t.powi(3)).abs() < 1e-13, "t={t}");
    }
}

#[test]
fn gamma_and_bessel_j_agree_with_normalization() {
    assert!((ln_gamma(10.5) - gamma(10.5).ln()).abs() < 1e-12);
    let (l, t) = (0.7, 5.0);
    let j = bessel_j(ord(l), t).unwrap();
    let want = normalized_bessel(ord(l), t).unwrap();
    let rebuilt = 2f64.powf(l) * gamma(l + 1.0) * t.powf(-l) * j;
    assert!((rebuilt - want).abs() < 1e-14);
}

#[test]
fn kernel_rejects_invalid_arguments() {
    assert!(dunkl_kernel_rank1(-0.1, 1.0, 1.0).is_err());
    assert!(dunkl_kernel_rank1(1.0, f64::INFINITY, 1.0).is_err());
    assert!(normalized_bessel(ord(0.7), f64::NAN).is_err());
}

proptest! {
    #[test]
    fn normalized_bessel_is_bounded_by_one(l in -0.49f64..8.0, t in 0.0f64..2000.0) {
        let v = normalized_bessel(ord(l), t).unwrap();
        prop_assert!(v.abs() <= 1.0 + 1e-12);
        let d = one_minus_bessel(ord(l), t).unwrap();
        prop_assert!((-1e-15..=2.0 + 1e-12).contains(&d));
    }

    #[test]
    fn one_minus_complements_the_value(l in -0.49f64..8.0, t in 0.0f64..200.0) {
        let a = normalized_bessel(ord(l), t).unwrap();
        let d = one_minus_bessel(ord(l), t).unwrap();
        prop_assert!((a + d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_one_kernel_is_bounded_and_symmetric(
        k in 0.0f64..5.0, x in -50.0f64..50.0, y in -50.0f64..50.0,
    ) {
        let e = dunkl_kernel_rank1(k, x, y).unwrap();
        prop_assert!(e.norm() <= 1.0 + 1e-12);
        let swapped = dunkl_kernel_rank1(k, y, x).unwrap();
        prop_assert!((e - swapped).norm() < 1e-14);
        // e_k(−x, y) is the complex conjugate
        let reflected = dunkl_kernel_rank1(k, -x, y).unwrap();
        prop_assert!((reflected - e.conj()).norm() < 1e-14);
    }
}
