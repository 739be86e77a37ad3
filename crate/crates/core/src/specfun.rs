//! Gamma and Beta functions, the cost exponent, the profile function `h`
//! and the closed-form constants of the partial-match analysis.
#![allow(clippy::excessive_precision)]

use std::f64::consts::{E, PI};
use std::sync::OnceLock;

use crate::error::{check_unit, Error, Result};

// Lanczos approximation with r = 10.900511 (Pugh, 2004). Relative error is
// below 1e-15 on the positive half line.
const LANCZOS_R: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_655_46e-5,
    1.051_423_785_817_219_742_10,
    -3.456_870_972_220_162_354_69,
    4.512_277_094_668_948_237_00,
    -2.982_852_253_235_766_557_21,
    1.056_397_115_771_267_130_77,
    -1.954_287_731_916_458_695_83e-1,
    1.709_705_434_044_412_243_07e-2,
    -5.719_261_174_043_052_812_83e-4,
    4.633_994_733_599_056_367_08e-6,
    -2.719_949_084_886_077_039_10e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_717_336_249_247_266_663_112_059_421_841_408_575_5;
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_222_345_518_445_781_647_212_251_852_647_427_9;

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |acc, (i, &dk)| acc + dk / (x + i as f64 - 1.0))
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: x,
            domain: "(0, inf)",
        })
    }
}

/// Gamma function for positive real arguments.
pub fn gamma(x: f64) -> Result<f64> {
    positive("x", x)?;
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x.fract() == 0.0 && x <= 20.0 {
        // (x-1)! is exact in f64 here
        return (1..x as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        lanczos_sum(x) * TWO_SQRT_E_OVER_PI * ((x - 0.5 + LANCZOS_R) / E).powf(x - 0.5)
    }
}

/// Natural logarithm of the Gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    positive("x", x)?;
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI.ln() - (PI * x).sin().ln() - ln_gamma_unchecked(1.0 - x)
    } else {
        lanczos_sum(x).ln()
            + LN_TWO_SQRT_E_OVER_PI
            + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / E).ln()
    }
}

/// Eulerian integral `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    positive("a", a)?;
    positive("b", b)?;
    Ok(beta_unchecked(a, b))
}

pub(crate) fn beta_unchecked(a: f64, b: f64) -> f64 {
    // Γ stays comfortably inside f64 range up to ~170; switch to logs well before.
    if a + b < 60.0 {
        gamma_unchecked(a) * gamma_unchecked(b) / gamma_unchecked(a + b)
    } else {
        ln_beta_unchecked(a, b).exp()
    }
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    positive("a", a)?;
    positive("b", b)?;
    Ok(ln_beta_unchecked(a, b))
}

pub(crate) fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b)
}

/// The cost exponent `(√17 − 3)/2`, the root of `β² + 3β − 2 = 0` in (0, 1).
pub fn beta_exponent() -> f64 {
    (17f64.sqrt() - 3.0) / 2.0
}

/// Profile function `h(s) = (s(1−s))^{β/2}`.
pub fn h(s: f64) -> Result<f64> {
    check_unit("s", s)?;
    Ok(h_unchecked(s))
}

#[inline]
pub(crate) fn h_unchecked(s: f64) -> f64 {
    (s * (1.0 - s)).powf(0.5 * beta_exponent())
}

/// Closed-form constants for quadtrees and 2-d trees.
///
/// `k1`, `k4` etc. follow the usual names of the limit theory: `k1` scales
/// the mean profile, `k2` is the pointwise variance factor of the limit
/// process, `k3` the variance at a uniform query and `k4 = k1² k3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSet {
    pub beta: f64,
    pub kappa: f64,
    pub k1: f64,
    pub c2: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    /// `E[Z(ξ)]` for a uniform query ξ.
    pub mean_z_xi: f64,
    pub kappa_par: f64,
    pub kappa_perp: f64,
    pub k1_par: f64,
    pub k1_perp: f64,
    pub k2_perp: f64,
    pub k3_perp: f64,
    pub k4_par: f64,
    pub k4_perp: f64,
}

impl ConstantSet {
    fn compute() -> Self {
        let beta = beta_exponent();
        let g = gamma_unchecked;
        let b_full = beta_unchecked(beta + 1.0, beta + 1.0);
        let b_half = beta_unchecked(beta / 2.0 + 1.0, beta / 2.0 + 1.0);

        let kappa = g(2.0 * beta + 2.0) / (2.0 * g(beta + 1.0).powi(3));
        let k1 = g(2.0 * beta + 2.0) * g(beta + 2.0)
            / (2.0 * g(beta + 1.0).powi(3) * g(beta / 2.0 + 1.0).powi(2));
        let c2 = 2.0 * b_full * (2.0 * beta + 1.0) / (3.0 * (1.0 - beta));
        let k2 = c2 - 1.0;
        let k3 = c2 * b_full - b_half * b_half;
        let k4 = k1 * k1 * k3;
        let mean_z_xi = g(beta / 2.0 + 1.0).powi(2) / g(beta + 2.0);

        let kappa_par = 13.0 * (3.0 - 5.0 * beta) / 4.0 * g(2.0 * beta + 2.0) / g(beta + 1.0).powi(3);
        let kappa_perp = 13.0 * (2.0 * beta - 1.0) / 2.0 * g(2.0 * beta + 2.0) / g(beta + 1.0).powi(3);
        let k1_par = kappa_par / b_half;
        let k1_perp = kappa_perp / b_half;

        let half_b1 = ((beta + 1.0) / 2.0).powi(2);
        let k2_perp = 2.0 * c2 / (2.0 * beta + 1.0) * half_b1 + 2.0 * b_full * half_b1 - 1.0;
        let k3_perp =
            (2.0 * c2 / (2.0 * beta + 1.0) + 2.0 * b_full) * half_b1 * b_full - b_half * b_half;

        ConstantSet {
            beta,
            kappa,
            k1,
            c2,
            k2,
            k3,
            k4,
            mean_z_xi,
            kappa_par,
            kappa_perp,
            k1_par,
            k1_perp,
            k2_perp,
            k3_perp,
            k4_par: k1_par * k1_par * k3,
            k4_perp: k1_perp * k1_perp * k3_perp,
        }
    }

    /// `(name, value)` pairs in a fixed order, as printed by the CLI.
    pub fn entries(&self) -> [(&'static str, f64); 16] {
        [
            ("beta", self.beta),
            ("kappa", self.kappa),
            ("K1", self.k1),
            ("c2", self.c2),
            ("K2", self.k2),
            ("K3", self.k3),
            ("K4", self.k4),
            ("meanZxi", self.mean_z_xi),
            ("kappaPar", self.kappa_par),
            ("kappaPerp", self.kappa_perp),
            ("K1Par", self.k1_par),
            ("K1Perp", self.k1_perp),
            ("K2Perp", self.k2_perp),
            ("K3Perp", self.k3_perp),
            ("K4Par", self.k4_par),
            ("K4Perp", self.k4_perp),
        ]
    }
}

/// The constant set, computed on first use.
pub fn constants() -> &'static ConstantSet {
    static CONSTANTS: OnceLock<ConstantSet> = OnceLock::new();
    CONSTANTS.get_or_init(ConstantSet::compute)
}
