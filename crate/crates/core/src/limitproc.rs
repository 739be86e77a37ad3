//! Martingale approximants `Z_n` of the limit process and the geometric
//! diagnostics of the underlying random partition.
//!
//! A node at address `v` carries labels `(U_v, V_v, W_v)`. Its split at
//! `x = U_v` sends the line to the left pair of children when `s < U_v` and
//! to the right pair otherwise. The quadtree variant splits both pairs at
//! height `V_v`; the 2-d tree variant splits the left pair at `V_v` and the
//! right pair at `W_v`.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Cell;
use crate::rng::{hashed_uniform, mix64, RngStream};
use crate::specfun::{beta_exponent, h_unchecked};

/// Depth cap for evaluations that expand `2^n` boxes.
pub const MAX_POINTWISE_DEPTH: u32 = 24;
/// Depth cap for full enumeration of the `4^n` cells.
pub const MAX_ENUMERATION_DEPTH: u32 = 12;
/// Largest grid accepted by [`simulate_path`].
pub const MAX_GRID_POINTS: usize = 10_000;

/// Node address: a word over the four children, packed two bits per digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Address {
    pub depth: u32,
    pub word: u64,
}

impl Address {
    pub const ROOT: Address = Address { depth: 0, word: 0 };

    /// Child `q` in 0..4 (bottom-left, top-left, bottom-right, top-right).
    #[inline]
    pub fn child(self, q: usize) -> Address {
        Address {
            depth: self.depth + 1,
            word: (self.word << 2) | q as u64,
        }
    }

    #[inline]
    fn code(self) -> u64 {
        (self.word << 6) | u64::from(self.depth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Labels {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

/// Anything that assigns labels to addresses.
pub trait LabelSource {
    fn labels(&self, at: Address) -> Labels;
}

impl<F: Fn(Address) -> Labels> LabelSource for F {
    fn labels(&self, at: Address) -> Labels {
        self(at)
    }
}

/// Lazily generated label family, a pure function of `(key, address)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitEnvironment {
    key: u64,
}

impl LimitEnvironment {
    /// Environment number `index` under `seed`.
    pub fn new(seed: u64, index: u64) -> Self {
        LimitEnvironment {
            key: RngStream::new(seed, index).key(),
        }
    }

    pub fn from_key(key: u64) -> Self {
        LimitEnvironment { key }
    }

    pub fn key(&self) -> u64 {
        self.key
    }
}

impl LabelSource for LimitEnvironment {
    #[inline]
    fn labels(&self, at: Address) -> Labels {
        let code = at.code();
        Labels {
            u: hashed_uniform(self.key, code, 0),
            v: hashed_uniform(self.key, code, 1),
            w: hashed_uniform(self.key, code, 2),
        }
    }
}

/// Which recursion builds the process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Quad,
    Kd,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quad" => Ok(Variant::Quad),
            "kd" => Ok(Variant::Kd),
            other => Err(Error::InvalidSpec(format!("unknown variant '{other}' (expected quad or kd)"))),
        }
    }
}

fn check_label(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: x,
            domain: "(0, 1)",
        })
    }
}

/// One step of the recursion at labels `(x, y)` applied to `f[0..4]`.
pub fn g_apply(x: f64, y: f64, f: [&dyn Fn(f64) -> f64; 4], s: f64) -> Result<f64> {
    g_apply_kd(x, y, y, f, s)
}

/// One step of the 2-d tree recursion: the left pair splits at `y`, the
/// right pair at `z`.
pub fn g_apply_kd(x: f64, y: f64, z: f64, f: [&dyn Fn(f64) -> f64; 4], s: f64) -> Result<f64> {
    check_label("x", x)?;
    check_label("y", y)?;
    check_label("z", z)?;
    crate::error::check_unit("s", s)?;
    let b = beta_exponent();
    Ok(if s < x {
        let t = s / x;
        (x * y).powf(b) * f[0](t) + (x * (1.0 - y)).powf(b) * f[1](t)
    } else {
        let t = (s - x) / (1.0 - x);
        ((1.0 - x) * z).powf(b) * f[2](t) + ((1.0 - x) * (1.0 - z)).powf(b) * f[3](t)
    })
}

fn check_depth(n: u32, cap: u32) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded {
            what: "depth",
            value: u64::from(n),
            cap: u64::from(cap),
        })
    } else {
        Ok(())
    }
}

struct Expansion<'a, E: ?Sized> {
    env: &'a E,
    depth: u32,
    kd: bool,
    beta: f64,
}

impl<E: LabelSource + ?Sized> Expansion<'_, E> {
    /// Sum over the hit leaves below `at`; `rel` is the line's relative
    /// position in the current box and `log_area` the log of its area.
    fn sum(&self, at: Address, rel: f64, log_area: f64) -> f64 {
        if at.depth == self.depth {
            let w = rel * (1.0 - rel);
            return if w > 0.0 {
                (self.beta * (log_area + 0.5 * w.ln())).exp()
            } else {
                0.0
            };
        }
        let Labels { u, v, w } = self.env.labels(at);
        let (side, rel, lx, y, first) = if rel < u {
            (u, rel / u, u.ln(), v, 0)
        } else {
            (1.0 - u, (rel - u) / (1.0 - u), (1.0 - u).ln(), if self.kd { w } else { v }, 2)
        };
        debug_assert!(side > 0.0);
        let base = log_area + lx;
        self.sum(at.child(first), rel, base + y.ln()) + self.sum(at.child(first + 1), rel, base + (1.0 - y).ln())
    }
}

fn expand<E: LabelSource + ?Sized>(n: u32, s: f64, env: &E, variant: Variant) -> Result<f64> {
    check_depth(n, MAX_POINTWISE_DEPTH)?;
    crate::error::check_unit("s", s)?;
    let e = Expansion {
        env,
        depth: n,
        kd: variant == Variant::Kd,
        beta: beta_exponent(),
    };
    if n == 0 {
        return Ok(h_unchecked(s));
    }
    Ok(e.sum(Address::ROOT, s, 0.0))
}

/// `Z_n(s)` for one environment.
pub fn simulate_pointwise<E: LabelSource + ?Sized>(n: u32, s: f64, env: &E) -> Result<f64> {
    expand(n, s, env, Variant::Quad)
}

/// `Z_n^=(s)`, the 2-d tree analogue.
pub fn simulate_pointwise_2d<E: LabelSource + ?Sized>(n: u32, s: f64, env: &E) -> Result<f64> {
    expand(n, s, env, Variant::Kd)
}

/// `Z_n` on a grid of increasing `s` values, all from the same environment.
pub fn simulate_path<E: LabelSource + ?Sized>(n: u32, grid: &[f64], env: &E, variant: Variant) -> Result<Vec<f64>> {
    check_depth(n, MAX_POINTWISE_DEPTH)?;
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty"));
    }
    if grid.len() > MAX_GRID_POINTS {
        return Err(Error::CapExceeded {
            what: "grid points",
            value: grid.len() as u64,
            cap: MAX_GRID_POINTS as u64,
        });
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidGrid("grid must be strictly increasing"));
    }
    grid.iter().map(|&s| expand(n, s, env, variant)).collect()
}

/// A level-`n` box met by the query line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitBox {
    pub cell: Cell,
    pub depth: u32,
}

impl HitBox {
    /// The x-projection `[ℓ, r)`.
    pub fn x_range(&self) -> (f64, f64) {
        (self.cell.x0, self.cell.x1)
    }
}

/// The `2^n` level-`n` boxes met by `x = s`, left to right and bottom to top.
pub fn hit_boxes<E: LabelSource + ?Sized>(n: u32, s: f64, env: &E, variant: Variant) -> Result<Vec<HitBox>> {
    check_depth(n, MAX_POINTWISE_DEPTH)?;
    crate::error::check_unit("s", s)?;
    let mut out = Vec::with_capacity(1 << n);
    let mut stack = vec![(Address::ROOT, Cell::UNIT)];
    while let Some((at, cell)) = stack.pop() {
        if at.depth == n {
            out.push(HitBox { cell, depth: n });
            continue;
        }
        let Labels { u, v, w } = env.labels(at);
        let sx = cell.x0 + u * cell.width();
        let right = s >= sx && !(s == cell.x1 && cell.x1 < 1.0);
        let (half, y, first) = if right {
            (cell.right_of(sx), if variant == Variant::Kd { w } else { v }, 2)
        } else {
            (cell.left_of(sx), v, 0)
        };
        let sy = cell.y0 + y * cell.height();
        // pushed in reverse so the top box pops after the bottom one
        stack.push((at.child(first + 1), half.above(sy)));
        stack.push((at.child(first), half.below(sy)));
    }
    Ok(out)
}

/// Largest cell width `W_n` and smallest gap `L_n` between distinct vertical
/// boundaries over the full level-`n` partition. Both variants split x at
/// `U`, so this does not depend on the variant.
pub fn diagnostics<E: LabelSource + ?Sized>(n: u32, env: &E) -> Result<(f64, f64)> {
    check_depth(n, MAX_ENUMERATION_DEPTH)?;
    let mut widest: f64 = 0.0;
    let mut bounds = vec![0.0, 1.0];
    let mut stack = vec![(Address::ROOT, 0.0f64, 1.0f64)];
    // only x-extents matter, so a box is tracked by its x-interval
    while let Some((at, x0, x1)) = stack.pop() {
        if at.depth == n {
            widest = widest.max(x1 - x0);
            continue;
        }
        let sx = x0 + env.labels(at).u * (x1 - x0);
        bounds.push(sx);
        for q in 0..4 {
            let (a, b) = if q < 2 { (x0, sx) } else { (sx, x1) };
            stack.push((at.child(q), a, b));
        }
    }
    bounds.sort_unstable_by(f64::total_cmp);
    bounds.dedup();
    let gap = bounds.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    Ok((widest, gap))
}

/// Seed-mixing helper for callers that need one environment per
/// `(replication, level)` pair.
pub fn derived_environment(seed: u64, replication: u64, salt: u64) -> LimitEnvironment {
    LimitEnvironment::from_key(mix64(RngStream::new(seed, replication).key() ^ mix64(salt)))
}
