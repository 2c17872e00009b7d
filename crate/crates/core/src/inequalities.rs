//! Both sides of the approximation, smoothness and weighted transform
//! inequalities, evaluated on one profile and one parameter cell.
//!
//! A [`RatioSample`] records `lhs`, `rhs` and `lhs / rhs` for an inequality
//! of the form `lhs ≲ rhs`. Two-sided estimates are split into two rows by
//! [`Side`]. Wherever a best-approximation error `E` enters at `p ≠ 2` the
//! residual `‖f − η(·/σ) f‖_p` stands in for it and the row is flagged.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::besov::{lq_sum, ApproximantChoice};
use crate::error::{invalid, DunklError, Result};
use crate::measure::{gauss_legendre, RadialGrid, RadialProfile, SpectralProfile, WeightParams};
use crate::smoothness::{Analysis, Mult};
use crate::transform::inverse_dunkl_transform_radial;

/// Lowest dyadic annulus `[2^j, 2^{j+1})` included in sums over `j ∈ Z`.
pub const LOWEST_ANNULUS: i32 = -40;

/// Number of terms kept in the tail sums `Σ_{j>n}` of the approximant
/// smoothness estimate. Terms decay at least like `2^{-j/2}` once `2^j`
/// passes the spectral radius.
const TAIL_TERMS: i32 = 64;

/// Gauss–Legendre nodes per window of the extremal family.
const WINDOW_NODES: usize = 48;

macro_rules! theorem_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// The inequalities the harness can evaluate.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum TheoremId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(TheoremId::$variant => $name,)*
                }
            }
        }
    };
}

theorem_ids! {
    Jackson11 => "JACKSON_11",
    Inverse12 => "INVERSE_12",
    SharpJackson14 => "SHARP_JACKSON_14",
    SharpInverse16 => "SHARP_INVERSE_16",
    ReverseMarchaud15 => "REVERSE_MARCHAUD_15",
    SharpMarchaud17 => "SHARP_MARCHAUD_17",
    ApproximantSmooth18 => "APPROXIMANT_SMOOTH_18",
    ModulusPittT5 => "MODULUS_PITT_T5",
    ModulusKelloggT5 => "MODULUS_KELLOGG_T5",
    Pitt1 => "PITT_1",
    Pitt2 => "PITT_2",
    Kellogg1 => "KELLOGG_1",
    Kellogg2 => "KELLOGG_2",
    HausdorffYoung => "HAUSDORFF_YOUNG",
    HardyLittlewood => "HARDY_LITTLEWOOD",
    Bernstein => "BERNSTEIN",
    LebesgueL1 => "LEBESGUE_L1",
    TitchmarshP2 => "TITCHMARSH_P2",
    K1Sharpness => "K1_SHARPNESS",
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = DunklError;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| DunklError::Config(format!("unknown theorem id {s:?}")))
    }
}

/// Which half of a two-sided estimate a row records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `tail sum ≲ ω`.
    Lower,
    /// `ω ≲ tail sum`.
    Upper,
}

/// A parameter cell. Which fields are required depends on the theorem; see
/// [`Cell::validate`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::serde_inf::option")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::serde_inf::option")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// `n`, `σ`, `δ` or `N` depending on the theorem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_or_delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approximant: Option<ApproximantChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    P,
    Q,
    R,
    M,
    S,
    N,
    Approximant,
    Side,
}

impl Field {
    const ALL: [Field; 8] = [
        Field::P,
        Field::Q,
        Field::R,
        Field::M,
        Field::S,
        Field::N,
        Field::Approximant,
        Field::Side,
    ];

    fn name(self) -> &'static str {
        match self {
            Field::P => "p",
            Field::Q => "q",
            Field::R => "r",
            Field::M => "m",
            Field::S => "s",
            Field::N => "n_or_delta",
            Field::Approximant => "approximant",
            Field::Side => "side",
        }
    }
}

/// `(required, optional)` fields per theorem.
fn fields(id: TheoremId) -> (&'static [Field], &'static [Field]) {
    use Field::*;
    use TheoremId::*;
    match id {
        Jackson11 | Inverse12 | SharpJackson14 | SharpInverse16 => (&[P, R, N], &[]),
        ReverseMarchaud15 | SharpMarchaud17 => (&[P, R, M, N], &[]),
        ApproximantSmooth18 => (&[P, R, N, Approximant, Side], &[]),
        ModulusPittT5 => (&[P, Q, R, N], &[]),
        ModulusKelloggT5 => (&[P, R, N], &[]),
        Pitt1 | Pitt2 => (&[P, Q], &[]),
        Kellogg1 => (&[P], &[Q]),
        Kellogg2 | HausdorffYoung | HardyLittlewood => (&[P], &[]),
        Bernstein => (&[P, R], &[]),
        LebesgueL1 => (&[P, R, N], &[]),
        TitchmarshP2 => (&[P, S], &[]),
        K1Sharpness => (&[P, N], &[Q]),
    }
}

impl Cell {
    fn has(&self, f: Field) -> bool {
        match f {
            Field::P => self.p.is_some(),
            Field::Q => self.q.is_some(),
            Field::R => self.r.is_some(),
            Field::M => self.m.is_some(),
            Field::S => self.s.is_some(),
            Field::N => self.n_or_delta.is_some(),
            Field::Approximant => self.approximant.is_some(),
            Field::Side => self.side.is_some(),
        }
    }

    /// Checks that exactly the parameters `id` needs are present and that
    /// they lie in the theorem's range.
    pub fn validate(&self, id: TheoremId) -> Result<()> {
        self.check_fields(id)?;
        self.check_range(id)
    }

    /// Checks only which parameters are present.
    pub fn check_fields(&self, id: TheoremId) -> Result<()> {
        let (req, opt) = fields(id);
        for f in Field::ALL {
            let wanted = req.contains(&f);
            if wanted && !self.has(f) {
                return Err(invalid(format!("{id}: missing parameter {}", f.name())));
            }
            if !wanted && !opt.contains(&f) && self.has(f) {
                return Err(invalid(format!("{id}: unexpected parameter {}", f.name())));
            }
        }
        Ok(())
    }

    /// Checks the parameter values against the theorem's admissible range.
    pub fn check_range(&self, id: TheoremId) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if let Some(v) = v {
                if v.is_nan() || v < 1.0 {
                    return Err(invalid(format!("{id}: {name} must be ≥ 1, got {v}")));
                }
            }
        }
        for (name, v) in
            [("r", self.r), ("m", self.m), ("s", self.s), ("n_or_delta", self.n_or_delta)]
        {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(invalid(format!("{id}: {name} must be positive, got {v}")));
                }
            }
        }
        let p = self.p.unwrap_or(2.0);
        let pc = conjugate(p);
        let within =
            |q: f64, a: f64, b: f64| q >= a.min(b) * (1.0 - 1e-12) && q <= a.max(b) * (1.0 + 1e-12);
        use TheoremId::*;
        let range_ok = match id {
            Jackson11 | Inverse12 | ModulusKelloggT5 | Bernstein => p.is_finite(),
            SharpJackson14 | SharpInverse16 | ReverseMarchaud15 | SharpMarchaud17
            | ApproximantSmooth18 => p > 1.0 && p.is_finite(),
            ModulusPittT5 => p > 1.0 && p.is_finite() && within(self.q.unwrap_or(p), p, pc),
            Pitt1 => p > 1.0 && p <= 2.0 && within(self.q.unwrap_or(p), p, pc),
            Pitt2 => p >= 2.0 && p.is_finite() && within(self.q.unwrap_or(p), p, pc),
            Kellogg1 => p > 1.0 && p <= 2.0 && self.q.is_none_or(|q| within(q, 2.0, pc)),
            Kellogg2 => p >= 2.0 && p.is_finite(),
            HausdorffYoung => p <= 2.0,
            HardyLittlewood => p > 1.0 && p <= 2.0,
            LebesgueL1 => p == 1.0,
            TitchmarshP2 => p == 2.0,
            K1Sharpness => p > 1.0 && p < 2.0 && self.q.is_none_or(|q| within(q, 2.0, pc)),
        };
        if !range_ok {
            return Err(invalid(format!("{id}: parameters {self} outside the admissible range")));
        }
        if matches!(id, ReverseMarchaud15 | SharpMarchaud17) && self.m <= self.r {
            return Err(invalid(format!("{id}: requires m > r")));
        }
        if matches!(
            id,
            Inverse12
                | SharpJackson14
                | SharpInverse16
                | ReverseMarchaud15
                | SharpMarchaud17
                | K1Sharpness
        ) && self.n_or_delta.is_some_and(|n| n.fract() != 0.0)
        {
            return Err(invalid(format!("{id}: n must be an integer")));
        }
        if id == ApproximantSmooth18 && self.n_or_delta.is_some_and(|n| n.fract() != 0.0) {
            return Err(invalid(format!("{id}: n must be an integer")));
        }
        Ok(())
    }

    /// Short label for the variant fields, used to tag corpus ids.
    pub fn variant_label(&self) -> Option<String> {
        let side = self.side.map(|s| match s {
            Side::Lower => "lower",
            Side::Upper => "upper",
        });
        let approx = self.approximant.map(|a| match a {
            ApproximantChoice::NearBest => "near-best",
            ApproximantChoice::ValleePoussin => "vallee-poussin",
        });
        match (side, approx) {
            (None, None) => None,
            (a, b) => Some([a, b].into_iter().flatten().collect::<Vec<_>>().join("/")),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, v) in [
            ("p", self.p),
            ("q", self.q),
            ("r", self.r),
            ("m", self.m),
            ("s", self.s),
            ("n", self.n_or_delta),
        ] {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        if let Some(v) = self.variant_label() {
            parts.push(v);
        }
        f.write_str(&parts.join(","))
    }
}

/// Conjugate exponent `p' = p/(p−1)`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// The two sides of one inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub lhs: f64,
    pub rhs: f64,
    pub surrogate: bool,
}

/// One row of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub theorem: TheoremId,
    pub corpus_id: String,
    pub cell: Cell,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub surrogate: bool,
    pub degenerate: bool,
}

impl RatioSample {
    /// Forms the ratio. `0/0` is recorded as `0` with the degeneracy flag;
    /// a zero right side under a nonzero left side is an error.
    pub fn new(
        theorem: TheoremId,
        corpus_id: impl Into<String>,
        cell: Cell,
        e: Evaluation,
    ) -> Result<Self> {
        if !(e.lhs.is_finite() && e.rhs.is_finite()) || e.lhs < 0.0 || e.rhs < 0.0 {
            return Err(invalid(format!(
                "{theorem}: non-finite or negative sides {} / {}",
                e.lhs, e.rhs
            )));
        }
        let (ratio, degenerate) = if e.rhs > 0.0 {
            (e.lhs / e.rhs, false)
        } else if e.lhs == 0.0 {
            (0.0, true)
        } else {
            return Err(DunklError::Degenerate { lhs: e.lhs });
        };
        Ok(Self {
            theorem,
            corpus_id: corpus_id.into(),
            cell,
            lhs: e.lhs,
            rhs: e.rhs,
            ratio,
            surrogate: e.surrogate,
            degenerate,
        })
    }
}

/// What an inequality is evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum Subject<'a> {
    Profile(&'a Analysis),
    /// The extremal family, represented by its spectral windows only.
    Extremal {
        lambda: f64,
        eps: f64,
    },
}

/// `‖F f · χ_j‖_q` for `j` from [`LOWEST_ANNULUS`] to the last annulus meeting
/// the spectral grid.
pub fn dyadic_spectral_norms(a: &Analysis, q: f64) -> Vec<(i32, f64)> {
    let top = a.view().spectrum().grid().radius();
    let last = top.log2().floor() as i32;
    (LOWEST_ANNULUS..=last)
        .map(|j| (j, a.view().spectral_norm_on(f64::powi(2.0, j), f64::powi(2.0, j + 1), q)))
        .collect()
}

/// `‖|s|^a · w(s) · F f‖_q` with the weight given pointwise.
fn weighted_spectral_norm(a: &Analysis, q: f64, weight: impl Fn(f64) -> f64) -> f64 {
    let m: Vec<f64> = a.view().frequencies().iter().map(|s| weight(*s)).collect();
    a.view().spectral_norm(Some(&m), q)
}

fn pitt_exponent(dim: f64, p: f64, q: f64) -> f64 {
    dim * (1.0 / conjugate(p) - 1.0 / q)
}

/// Evaluates `id` on `subject` at `cell`.
pub fn eval_theorem(subject: Subject<'_>, id: TheoremId, cell: &Cell) -> Result<Evaluation> {
    cell.validate(id)?;
    match subject {
        Subject::Profile(a) => {
            if id == TheoremId::K1Sharpness {
                return Err(invalid("K1_SHARPNESS is evaluated on the extremal family"));
            }
            eval_profile(a, id, cell)
        }
        Subject::Extremal { lambda, eps } => {
            if id != TheoremId::K1Sharpness {
                return Err(invalid(format!("{id} is not evaluated on the extremal family")));
            }
            let p = cell.p.expect("validated");
            let n = cell.n_or_delta.expect("validated") as usize;
            let ex = ExtremalSpectrum::new(WeightParams::new(lambda)?, n, eps, conjugate(p))?;
            let kellogg = ex.kellogg_sum(conjugate(p));
            Ok(match cell.q {
                None => Evaluation { lhs: kellogg, rhs: harmonic_root(n), surrogate: false },
                Some(q) => Evaluation { lhs: ex.pitt_side(p, q), rhs: kellogg, surrogate: false },
            })
        }
    }
}

/// `(Σ_{l≤N} 1/l)^{1/2}`.
pub fn harmonic_root(n: usize) -> f64 {
    (1..=n).map(|l| 1.0 / l as f64).sum::<f64>().sqrt()
}

fn eval_profile(a: &Analysis, id: TheoremId, cell: &Cell) -> Result<Evaluation> {
    use TheoremId::*;
    let p = cell.p.expect("every profile theorem takes p");
    let dim = a.profile().params().dim();
    let ev = |lhs, rhs, surrogate| Ok(Evaluation { lhs, rhs, surrogate });
    match id {
        Jackson11 => {
            let sigma = cell.n_or_delta.unwrap();
            let r = cell.r.unwrap();
            let (e, sur) = a.approximation_error(sigma, p)?;
            ev(e, a.modulus(r, 1.0 / sigma, p)?, sur)
        }
        Inverse12 => {
            let n = cell.n_or_delta.unwrap();
            let r = cell.r.unwrap();
            let mut sum = 0.0;
            let mut sur = false;
            for j in 0..=(n as i64) {
                let (e, s) = a.approximation_error(j as f64, p)?;
                sur |= s;
                sum += (j as f64 + 1.0).powf(r - 1.0) * e;
            }
            ev(a.modulus(r, 1.0 / n, p)?, n.powf(-r) * sum, sur)
        }
        SharpJackson14 | SharpInverse16 => {
            let n = cell.n_or_delta.unwrap();
            let r = cell.r.unwrap();
            let ex = if id == SharpJackson14 { p.max(2.0) } else { p.min(2.0) };
            let mut terms = Vec::new();
            let mut sur = false;
            for j in 1..=(n as i64) {
                let (e, s) = a.approximation_error(j as f64, p)?;
                sur |= s;
                terms.push((j as f64).powf(r - 1.0 / ex) * e);
            }
            let sum = n.powf(-r) * lq_sum(terms, ex);
            let omega = a.modulus(r, 1.0 / n, p)?;
            if id == SharpJackson14 {
                ev(sum, omega, sur)
            } else {
                ev(omega, sum + a.lp_norm(p)? * n.powf(-r), sur)
            }
        }
        ReverseMarchaud15 | SharpMarchaud17 => {
            let n = cell.n_or_delta.unwrap();
            let r = cell.r.unwrap();
            let m = cell.m.unwrap();
            let ex = if id == ReverseMarchaud15 { p.max(2.0) } else { p.min(2.0) };
            let deltas: Vec<f64> = (1..=(n as i64)).map(|j| 1.0 / j as f64).collect();
            a.prefetch_moduli(&[m], &deltas, &[p])?;
            let mut terms = Vec::new();
            for j in 1..=(n as i64) {
                terms.push((j as f64).powf(r - 1.0 / ex) * a.modulus(m, 1.0 / j as f64, p)?);
            }
            let sum = n.powf(-r) * lq_sum(terms, ex);
            let omega = a.modulus(r, 1.0 / n, p)?;
            let base = a.lp_norm(p)? * n.powf(-r);
            if id == ReverseMarchaud15 {
                ev(sum, omega + base, false)
            } else {
                ev(omega, sum + base, false)
            }
        }
        ApproximantSmooth18 => {
            let n = cell.n_or_delta.unwrap() as i32;
            let r = cell.r.unwrap();
            let choice = cell.approximant.unwrap();
            let side = cell.side.unwrap();
            let ex = if side == Side::Lower { p.max(2.0) } else { p.min(2.0) };
            // beyond twice the spectral radius every approximant is the identity
            let top = a.view().spectrum().grid().radius();
            let saturate = (4.0 * top).log2().ceil() as i32;
            let mut mults = Vec::new();
            let mut sur = false;
            for j in (n + 1)..=(n + TAIL_TERMS) {
                let (m, s) = choice.laplacian(r, j.min(saturate), p);
                sur |= s;
                mults.push(m);
            }
            let norms = a.norms(&mults, &[p])?;
            let terms = ((n + 1)..=(n + TAIL_TERMS))
                .zip(&norms)
                .map(|(j, v)| f64::powf(2.0, -r * j as f64) * v[0]);
            let sum = lq_sum(terms, ex);
            let omega = a.modulus(r, f64::powi(2.0, -n), p)?;
            match side {
                Side::Lower => ev(sum, omega, sur),
                Side::Upper => ev(omega, sum, sur),
            }
        }
        ModulusPittT5 => {
            let (q, r, delta) = (cell.q.unwrap(), cell.r.unwrap(), cell.n_or_delta.unwrap());
            let e = pitt_exponent(dim, p, q);
            let side = weighted_spectral_norm(a, q, |s| s.powf(e) * (delta * s).powf(r).min(1.0));
            let omega = a.modulus(r, delta, p)?;
            if p <= 2.0 {
                ev(side, omega, false)
            } else {
                ev(omega, side, false)
            }
        }
        ModulusKelloggT5 => {
            let (r, delta) = (cell.r.unwrap(), cell.n_or_delta.unwrap());
            let side = dyadic_spectral_norms(a, conjugate(p))
                .into_iter()
                .map(|(j, v)| (f64::powi(2.0, j) * delta).powf(2.0 * r).min(1.0) * v * v)
                .sum::<f64>()
                .sqrt();
            let omega = a.modulus(r, delta, p)?;
            if p <= 2.0 {
                ev(side, omega, false)
            } else {
                ev(omega, side, false)
            }
        }
        Pitt1 | Pitt2 => {
            let q = cell.q.unwrap();
            let e = pitt_exponent(dim, p, q);
            let side = weighted_spectral_norm(a, q, |s| s.powf(e));
            let norm = a.lp_norm(p)?;
            if id == Pitt1 {
                ev(side, norm, false)
            } else {
                ev(norm, side, false)
            }
        }
        Kellogg1 | Kellogg2 => {
            let kellogg = kellogg_sum(a, conjugate(p));
            match (id, cell.q) {
                (Kellogg1, Some(q)) => {
                    let e = pitt_exponent(dim, p, q);
                    ev(weighted_spectral_norm(a, q, |s| s.powf(e)), kellogg, false)
                }
                (Kellogg1, None) => ev(kellogg, a.lp_norm(p)?, false),
                _ => ev(a.lp_norm(p)?, kellogg, false),
            }
        }
        HausdorffYoung => ev(a.view().spectral_norm(None, conjugate(p)), a.lp_norm(p)?, false),
        HardyLittlewood => {
            let e = dim * (1.0 - 2.0 / p);
            ev(weighted_spectral_norm(a, p, |s| s.powf(e)), a.lp_norm(p)?, false)
        }
        Bernstein => {
            let r = cell.r.unwrap();
            let sigma = a
                .profile()
                .band_limit()
                .ok_or_else(|| invalid("BERNSTEIN applies to band-limited profiles only"))?;
            ev(a.norm(Mult::Laplacian { r }, p)?, sigma.powf(r) * a.lp_norm(p)?, false)
        }
        LebesgueL1 => {
            let (r, delta) = (cell.r.unwrap(), cell.n_or_delta.unwrap());
            let side = weighted_spectral_norm(a, f64::INFINITY, |s| (delta * s).powf(r).min(1.0));
            ev(side, a.modulus(r, delta, 1.0)?, false)
        }
        TitchmarshP2 => {
            let s = cell.s.unwrap();
            let lip = a.lipschitz_norm(s, 2.0, crate::besov::DEFAULT_DEPTH)?;
            let tail = dyadic_spectral_norms(a, 2.0)
                .into_iter()
                .filter(|(j, _)| *j >= 0)
                .map(|(j, v)| f64::powf(2.0, s * j as f64) * v)
                .fold(0.0, f64::max);
            ev(lip, a.view().spectral_norm(None, 2.0) + tail, false)
        }
        K1Sharpness => unreachable!("handled by the caller"),
    }
}

/// `(Σ_{j∈Z} ‖F f · χ_j‖_{q}²)^{1/2}`.
pub fn kellogg_sum(a: &Analysis, q: f64) -> f64 {
    dyadic_spectral_norms(a, q).into_iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
}

/// Smooth bump on `(0, 1)`.
fn window_bump(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        (-1.0 / (u * (1.0 - u))).exp()
    }
}

/// Log of the bump, finite inside `(0, 1)`.
fn ln_window_bump(u: f64) -> f64 {
    -1.0 / (u * (1.0 - u))
}

/// The transform of the extremal family `f_N = Σ_{l≤N} l^{-1/2} F^{-1} ψ_l`,
/// where `ψ_l` is a smooth bump on `[2^l + ε, 2^l + 2ε]` with `‖ψ_l‖_{p'} = 1`.
///
/// Windows are handled in local coordinates with their own Gauss–Legendre
/// rule, so `N` is not limited by any grid. Weights are kept in log form
/// because `s^{2λ+1}` overflows for `s = 2^N` with large `N`.
#[derive(Debug, Clone)]
pub struct ExtremalSpectrum {
    params: WeightParams,
    n: usize,
    eps: f64,
    norm_exponent: f64,
    unit_nodes: Vec<f64>,
    unit_weights: Vec<f64>,
}

impl ExtremalSpectrum {
    /// `norm_exponent` is the `p'` in which each bump is normalized.
    pub fn new(params: WeightParams, n: usize, eps: f64, norm_exponent: f64) -> Result<Self> {
        if n < 1 {
            return Err(invalid("extremal family needs N ≥ 1"));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid(format!("window offset ε must lie in (0, 1), got {eps}")));
        }
        if norm_exponent.is_nan() || norm_exponent < 1.0 {
            return Err(invalid(format!(
                "normalization exponent must be ≥ 1, got {norm_exponent}"
            )));
        }
        let (x, w) = gauss_legendre(WINDOW_NODES);
        let unit_nodes = x.iter().map(|v| 0.5 * (v + 1.0)).collect();
        let unit_weights = w.iter().map(|v| 0.5 * v).collect();
        Ok(Self { params, n, eps, norm_exponent, unit_nodes, unit_weights })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `[2^l + ε, 2^l + 2ε]`.
    pub fn window(&self, l: usize) -> (f64, f64) {
        let a = f64::powi(2.0, l as i32) + self.eps;
        (a, a + self.eps)
    }

    /// `(s_i, ln μ_i, ln bump(u_i))` on window `l`, bump not normalized.
    fn raw_rule(&self, l: usize) -> Vec<(f64, f64, f64)> {
        let (a, _) = self.window(l);
        let lc = self.params.measure_constant().ln();
        let e = 2.0 * self.params.lambda() + 1.0;
        self.unit_nodes
            .iter()
            .zip(&self.unit_weights)
            .map(|(u, w)| {
                let s = a + self.eps * u;
                (s, lc + (w * self.eps).ln() + e * s.ln(), ln_window_bump(*u))
            })
            .collect()
    }

    /// `ln ‖bump_l‖_{p'}`.
    fn ln_raw_norm(&self, l: usize) -> f64 {
        let raw = self.raw_rule(l);
        let pc = self.norm_exponent;
        if pc.is_infinite() {
            raw.iter().map(|x| x.2).fold(f64::NEG_INFINITY, f64::max)
        } else {
            log_sum_exp(raw.iter().map(|(_, lm, lb)| lm + pc * lb)) / pc
        }
    }

    /// `(s_i, ln μ_i, ln ψ_l(s_i))` on window `l`, with `ψ_l` normalized.
    fn window_rule(&self, l: usize) -> Vec<(f64, f64, f64)> {
        let ln_norm = self.ln_raw_norm(l);
        self.raw_rule(l).into_iter().map(|(s, lm, lb)| (s, lm, lb - ln_norm)).collect()
    }

    /// `‖s^a ψ_l‖_q^q` in log form.
    fn ln_window_power(&self, l: usize, a: f64, q: f64) -> f64 {
        log_sum_exp(self.window_rule(l).into_iter().map(|(s, lm, lp)| lm + q * (a * s.ln() + lp)))
    }

    /// `‖ψ_l‖_q` for a single window.
    pub fn window_norm(&self, l: usize, q: f64) -> f64 {
        if q.is_infinite() {
            return self.window_rule(l).iter().map(|x| x.2.exp()).fold(0.0, f64::max);
        }
        (self.ln_window_power(l, 0.0, q) / q).exp()
    }

    /// `(Σ_j ‖F f_N χ_j‖_{q}²)^{1/2}`; each annulus holds exactly one window.
    pub fn kellogg_sum(&self, q: f64) -> f64 {
        (1..=self.n).map(|l| self.window_norm(l, q).powi(2) / l as f64).sum::<f64>().sqrt()
    }

    /// `‖|s|^{d(1/p'−1/q)} F f_N‖_q`.
    pub fn pitt_side(&self, p: f64, q: f64) -> f64 {
        let a = pitt_exponent(self.params.dim(), p, q);
        let lns: Vec<f64> = (1..=self.n)
            .map(|l| -(q / 2.0) * (l as f64).ln() + self.ln_window_power(l, a, q))
            .collect();
        (log_sum_exp(lns.into_iter()) / q).exp()
    }

    /// Samples of `F f_N` at the given frequencies.
    pub fn sample(&self, freqs: &[f64]) -> Vec<f64> {
        let scales: Vec<f64> =
            (1..=self.n).map(|l| (-self.ln_raw_norm(l)).exp() / (l as f64).sqrt()).collect();
        freqs
            .iter()
            .map(|&s| {
                (1..=self.n)
                    .map(|l| {
                        let (a, _) = self.window(l);
                        scales[l - 1] * window_bump((s - a) / self.eps)
                    })
                    .sum()
            })
            .collect()
    }
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// The extremal function `f_N` as a spatial profile on `grid`.
///
/// Fails with a resolution error when the last window ends beyond the
/// grid's spectral radius.
pub fn extremal_family(
    params: WeightParams,
    grid: Arc<RadialGrid>,
    n: usize,
    eps: f64,
    p: f64,
) -> Result<RadialProfile> {
    let ex = ExtremalSpectrum::new(params, n, eps, conjugate(p))?;
    let (_, end) = ex.window(n);
    let dual = grid.dual();
    if end > dual.radius() {
        return Err(DunklError::Resolution { requested: end, cap: dual.radius() });
    }
    let samples = ex.sample(dual.nodes());
    let g = SpectralProfile::from_samples(params, Arc::new(dual), samples)?;
    inverse_dunkl_transform_radial(&g)
}

/// Grid on which the spatial extremal function decays and resolves its
/// highest window.
pub fn extremal_grid(n: usize, eps: f64) -> Result<RadialGrid> {
    let radius = 480.0 / eps;
    let needed = 1.02 * (f64::powi(2.0, n as i32) + 2.0 * eps);
    let panels = (needed * radius / 0.8 / 64.0).ceil().max(16.0) as usize;
    crate::measure::make_grid(radius, panels, 64)?.with_dual_radius(needed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::make_grid;

    fn gaussian(lambda: f64) -> Analysis {
        let grid = Arc::new(make_grid(40.0, 64, 64).unwrap());
        let f = RadialProfile::from_fn(WeightParams::new(lambda).unwrap(), grid, |r| {
            (-0.5 * r * r).exp()
        })
        .unwrap();
        Analysis::new(&f).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.name().parse::<TheoremId>().unwrap(), *id);
            let js = serde_json::to_string(id).unwrap();
            assert_eq!(js, format!("\"{}\"", id.name()));
        }
    }

    #[test]
    fn cell_validation() {
        let c = Cell { p: Some(1.5), ..Default::default() };
        assert!(c.validate(TheoremId::HausdorffYoung).is_ok());
        assert!(c.validate(TheoremId::Jackson11).is_err());
        let extra = Cell { p: Some(1.5), r: Some(1.0), ..Default::default() };
        assert!(extra.validate(TheoremId::HausdorffYoung).is_err());
        let bad_q = Cell { p: Some(1.5), q: Some(4.0), ..Default::default() };
        assert!(bad_q.validate(TheoremId::Pitt1).is_err());
    }

    #[test]
    fn hausdorff_young_gaussian() {
        let a = gaussian(0.7);
        for p in [1.25, 1.5, 2.0] {
            let cell = Cell { p: Some(p), ..Default::default() };
            let e = eval_theorem(Subject::Profile(&a), TheoremId::HausdorffYoung, &cell).unwrap();
            assert!(e.lhs <= e.rhs * (1.0 + 1e-6));
        }
    }

    #[test]
    fn annuli_partition_the_norm() {
        let a = gaussian(1.5);
        let q = 1.7;
        let total: f64 = dyadic_spectral_norms(&a, q).iter().map(|(_, v)| v.powf(q)).sum();
        let direct = a.view().spectral_norm(None, q).powf(q);
        assert!((total - direct).abs() < 1e-10 * direct);
    }

    #[test]
    fn extremal_windows_are_normalized() {
        let ex = ExtremalSpectrum::new(WeightParams::new(0.7).unwrap(), 64, 0.1, 3.0).unwrap();
        for l in [1, 10, 64] {
            assert!((ex.window_norm(l, 3.0) - 1.0).abs() < 1e-12);
        }
        assert!((ex.kellogg_sum(3.0) / harmonic_root(64) - 1.0).abs() < 1e-12);
    }
}
