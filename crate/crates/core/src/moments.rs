//! Moments of the marginal factor Ψ, moments of Ξ^⊥, and the second-moment
//! integral operator `K` acting on functions sampled on a grid.
#![allow(clippy::excessive_precision)]

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::integrate_pieces;
use crate::specfun::{beta_exponent, beta_unchecked, constants, h_unchecked, ln_beta_unchecked, ln_gamma};

/// Largest moment order accepted by [`psi_moments`].
pub const MAX_MOMENT_ORDER: usize = 60;
/// Orders above this are accumulated in log space.
const LOG_SPACE_FROM: usize = 30;
/// Minimum number of grid points for [`apply_k`].
pub const MIN_GRID_POINTS: usize = 64;
/// Default grid: 512 uniform intervals, 513 points including both endpoints.
pub const DEFAULT_GRID_POINTS: usize = 513;
/// Largest iteration count for [`second_moment_iterates`].
pub const MAX_ITERATES: usize = 30;
/// Absolute quadrature tolerance for each integral in [`apply_k`].
pub const K_QUADRATURE_TOL: f64 = 1e-8;

/// Moments `c_1..c_M` of a mean-one random variable.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    values: Vec<f64>,
}

impl MomentTable {
    pub fn max_order(&self) -> usize {
        self.values.len()
    }

    /// `c_m`, with `c_0 = 1`.
    ///
    /// Panics if `m` exceeds [`MomentTable::max_order`].
    pub fn get(&self, m: usize) -> f64 {
        if m == 0 {
            1.0
        } else {
            self.values[m - 1]
        }
    }

    /// `c_1..c_M` in order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_order(max_order: usize) -> Result<()> {
    if max_order < 1 {
        return Err(Error::Order);
    }
    if max_order > MAX_MOMENT_ORDER {
        return Err(Error::CapExceeded {
            what: "moment order",
            value: max_order as u64,
            cap: MAX_MOMENT_ORDER as u64,
        });
    }
    Ok(())
}

fn ln_binomial(m: usize, l: usize) -> f64 {
    let lg = |k: usize| ln_gamma(k as f64 + 1.0).expect("positive argument");
    lg(m) - lg(l) - lg(m - l)
}

fn binomial(m: usize, l: usize) -> f64 {
    let l = l.min(m - l);
    (0..l).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// `Σ_{ℓ ∈ range} C(m,ℓ) B(βℓ+1, β(m−ℓ)+1) c_ℓ c_{m−ℓ}` for the moment
/// sequence known so far (`c[0] = c_0 = 1`).
fn convolution(m: usize, c: &[f64], range: std::ops::RangeInclusive<usize>) -> f64 {
    let beta = beta_exponent();
    let b = |l: usize| (beta * l as f64 + 1.0, beta * (m - l) as f64 + 1.0);
    if m <= LOG_SPACE_FROM {
        range
            .map(|l| {
                let (p, q) = b(l);
                binomial(m, l) * beta_unchecked(p, q) * c[l] * c[m - l]
            })
            .sum()
    } else {
        let logs: Vec<f64> = range
            .map(|l| {
                let (p, q) = b(l);
                ln_binomial(m, l) + ln_beta_unchecked(p, q) + c[l].ln() + c[m - l].ln()
            })
            .collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        top.exp() * logs.iter().map(|&v| (v - top).exp()).sum::<f64>()
    }
}

/// Moments `c_m = E[Ψ^m]` of the one-dimensional marginal factor, from the
/// recursion
/// `c_m = (βm+1) / ((m−1)(m+1−3βm/2)) · Σ_{ℓ=1}^{m−1} C(m,ℓ) B(βℓ+1, β(m−ℓ)+1) c_ℓ c_{m−ℓ}`
/// with `c_1 = 1`.
pub fn psi_moments(max_order: usize) -> Result<MomentTable> {
    check_order(max_order)?;
    let beta = beta_exponent();
    let mut c = vec![1.0, 1.0];
    for m in 2..=max_order {
        let mf = m as f64;
        let coef = (beta * mf + 1.0) / ((mf - 1.0) * (mf + 1.0 - 1.5 * beta * mf));
        let next = coef * convolution(m, &c, 1..=m - 1);
        c.push(next);
    }
    c.remove(0);
    Ok(MomentTable { values: c })
}

/// Moments of Ξ^⊥:
/// `E[(Ξ^⊥)^m] = ((β+1)/2)^m Σ_{ℓ=0}^{m} C(m,ℓ) B(βℓ+1, β(m−ℓ)+1) c_ℓ c_{m−ℓ}`.
pub fn xi_perp_moments(max_order: usize) -> Result<MomentTable> {
    let psi = psi_moments(max_order)?;
    let mut c = Vec::with_capacity(max_order + 1);
    c.push(1.0);
    c.extend_from_slice(psi.values());
    let half = (beta_exponent() + 1.0) / 2.0;
    let values = (1..=max_order)
        .map(|m| half.powi(m as i32) * convolution(m, &c, 0..=m))
        .collect();
    Ok(MomentTable { values })
}

/// A real function sampled on a strictly increasing grid covering `[0, 1]`.
///
/// Between grid points it is read by linear interpolation. Functions that
/// vanish at both endpoints (every iterate of `K` does) are interpolated
/// through `f/h²` instead, so the `(s(1−s))^β` edge behaviour is reproduced
/// exactly rather than cut off by a chord.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    // f/h² at the grid points; endpoints copy their neighbour
    ratio: Option<Vec<f64>>,
}

impl GridFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidGrid("grid and values differ in length"));
        }
        if grid.len() < 2 {
            return Err(Error::InvalidGrid("need at least two grid points"));
        }
        if grid[0] != 0.0 || grid[grid.len() - 1] != 1.0 {
            return Err(Error::InvalidGrid("grid must start at 0 and end at 1"));
        }
        if grid.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::InvalidGrid("grid must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("values must be finite"));
        }
        let n = grid.len();
        let ratio = (values[0] == 0.0 && values[n - 1] == 0.0 && n >= 3).then(|| {
            let mut r: Vec<f64> = grid
                .iter()
                .zip(&values)
                .map(|(&s, &v)| v / h_unchecked(s).powi(2))
                .collect();
            r[0] = r[1];
            r[n - 1] = r[n - 2];
            r
        });
        Ok(GridFunction { grid, values, ratio })
    }

    /// Samples `f` on `points` equally spaced points including both endpoints.
    pub fn sample<F: Fn(f64) -> f64>(points: usize, f: F) -> Result<Self> {
        let grid = uniform_grid(points)?;
        let values = grid.iter().map(|&s| f(s)).collect();
        GridFunction::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Interpolated value; arguments are clamped to `[0, 1]`.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let i = self.grid.partition_point(|&g| g <= t);
        if i >= self.grid.len() {
            return self.values[self.values.len() - 1];
        }
        let (g0, g1) = (self.grid[i - 1], self.grid[i]);
        let w = (t - g0) / (g1 - g0);
        match &self.ratio {
            Some(r) => h_unchecked(t).powi(2) * (r[i - 1] + (r[i] - r[i - 1]) * w),
            None => self.values[i - 1] + (self.values[i] - self.values[i - 1]) * w,
        }
    }

    /// `sup |self − other|` over the shared grid.
    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn map_grid<F: Fn(f64) -> Result<f64> + Sync>(&self, f: F) -> Result<GridFunction> {
        let values = self.grid.par_iter().map(|&s| f(s)).collect::<Result<Vec<_>>>()?;
        GridFunction::new(self.grid.clone(), values)
    }
}

/// `points` equally spaced values from 0 to 1 inclusive.
pub fn uniform_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidGrid("need at least two grid points"));
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i + 1 == points { 1.0 } else { i as f64 / n })
        .collect())
}

/// The inhomogeneous part of `K`: `2 B(β+1, β+1) h(s)² / (β+1)`.
pub fn k_inhomogeneous(s: f64) -> f64 {
    let beta = beta_exponent();
    let b_full = beta_unchecked(beta + 1.0, beta + 1.0);
    let hs = h_unchecked(s);
    2.0 * b_full * hs * hs / (beta + 1.0)
}

/// The homogeneous part of `K` at one point:
/// `(2/(2β+1)) [∫_s^1 x^{2β} f(s/x) dx + ∫_0^s (1−x)^{2β} f((1−s)/(1−x)) dx]`.
fn k_homogeneous(f: &GridFunction, s: f64) -> Result<f64> {
    let beta = beta_exponent();
    let two_beta = 2.0 * beta;

    // f(s/x) is linear in s/x between grid nodes: kinks sit at x = s/t_j
    let mut breaks = vec![s];
    breaks.extend(
        f.grid
            .iter()
            .rev()
            .filter(|&&t| t > s && t < 1.0)
            .map(|&t| s / t)
            .filter(|&x| x > s && x < 1.0),
    );
    breaks.push(1.0);
    let upper = integrate_pieces(
        |x| x.powf(two_beta) * f.eval(s / x),
        &breaks,
        K_QUADRATURE_TOL,
    )?;

    let r = 1.0 - s;
    let mut breaks = vec![0.0];
    breaks.extend(
        f.grid
            .iter()
            .filter(|&&t| t > r && t < 1.0)
            .map(|&t| 1.0 - r / t)
            .filter(|&x| x > 0.0 && x < s),
    );
    breaks.push(s);
    let lower = integrate_pieces(
        |x| (1.0 - x).powf(two_beta) * f.eval(r / (1.0 - x)),
        &breaks,
        K_QUADRATURE_TOL,
    )?;

    Ok(2.0 / (two_beta + 1.0) * (upper + lower))
}

/// Applies the second-moment operator
/// `(Kf)(s) = (2/(2β+1)) [∫_s^1 x^{2β} f(s/x) dx + ∫_0^s (1−x)^{2β} f((1−s)/(1−x)) dx]
///            + 2 B(β+1,β+1) h(s)²/(β+1)`
/// at every grid point.
pub fn apply_k(f: &GridFunction) -> Result<GridFunction> {
    if f.len() < MIN_GRID_POINTS {
        return Err(Error::GridTooCoarse {
            points: f.len(),
            required: MIN_GRID_POINTS,
        });
    }
    f.map_grid(|s| Ok(k_homogeneous(f, s)? + k_inhomogeneous(s)))
}

/// `m_n = K^n(h²)`, the pointwise second moment `E[Z_n(s)²]` of the n-th
/// limit-process approximant, sampled on `points` uniform grid points.
pub fn second_moment_iterates(n: usize, points: usize) -> Result<GridFunction> {
    if n > MAX_ITERATES {
        return Err(Error::CapExceeded {
            what: "iterations",
            value: n as u64,
            cap: MAX_ITERATES as u64,
        });
    }
    let mut m = GridFunction::sample(points, |s| h_unchecked(s).powi(2))?;
    for _ in 0..n {
        m = apply_k(&m)?;
    }
    Ok(m)
}

/// Lipschitz constant `4/(2β+1)²` of `K` in the supremum norm.
pub fn k_contraction_constant() -> f64 {
    let beta = beta_exponent();
    4.0 / (2.0 * beta + 1.0).powi(2)
}

/// The fixed point `c₂ h²` of `K` sampled on `points` grid points.
pub fn second_moment_limit(points: usize) -> Result<GridFunction> {
    let c2 = constants().c2;
    GridFunction::sample(points, |s| c2 * h_unchecked(s).powi(2))
}
