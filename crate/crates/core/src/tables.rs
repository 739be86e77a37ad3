//! Ready-made result tables for the command-line tool and the examples.

use rand::Rng;

use crate::error::Result;
use crate::experiment::TreeFlavor;
use crate::geometry::Cell;
use crate::kdtree::KdTree;
use crate::limitproc::{diagnostics, simulate_path, LimitEnvironment, Variant};
use crate::moments::{psi_moments, second_moment_iterates, second_moment_limit, xi_perp_moments};
use crate::output::{Table, Value};
use crate::quadtree::{sample_poisson_count, sample_uniform_points, QuadTree};
use crate::rng::RngStream;
use crate::specfun::constants;

/// Every named constant with its value.
pub fn constants_table() -> Table {
    let mut t = Table::new(&["name", "value"]);
    for (name, value) in constants().entries() {
        t.push(vec![Value::Text(name.to_string()), value.into()]);
    }
    t
}

/// Moments `c_m` of the marginal factor and of its perpendicular analogue.
pub fn moments_table(max_order: usize) -> Result<Table> {
    let psi = psi_moments(max_order)?;
    let perp = xi_perp_moments(max_order)?;
    let mut t = Table::new(&["m", "c_m", "xi_perp_m"]);
    for m in 1..=max_order {
        t.push_nums(&[m as f64, psi.get(m), perp.get(m)]);
    }
    Ok(t)
}

/// `m_n = K^n(h²)` on the grid next to its limit `c₂ h²`.
pub fn second_moment_table(iters: usize, grid_points: usize) -> Result<Table> {
    let m = second_moment_iterates(iters, grid_points)?;
    let limit = second_moment_limit(grid_points)?;
    let mut t = Table::new(&["s", "m_n", "limit", "difference"]);
    for (i, &s) in m.grid().iter().enumerate() {
        let (a, b) = (m.values()[i], limit.values()[i]);
        t.push_nums(&[s, a, b, b - a]);
    }
    Ok(t.with_metadata(format!("iterations: {iters}")))
}

fn sample_flavor<R: Rng + ?Sized>(flavor: TreeFlavor, n: usize, rng: &mut R) -> Result<Box<dyn Fn(f64) -> Result<u64>>> {
    let pts = sample_uniform_points(n, rng);
    Ok(match flavor {
        TreeFlavor::Quad => {
            let tree = QuadTree::build_in(Cell::UNIT, &pts)?;
            Box::new(move |s| tree.cost(s))
        }
        TreeFlavor::Kd(axis) => {
            let tree = KdTree::build(&pts, axis)?;
            Box::new(move |s| tree.cost(s))
        }
    })
}

/// Cost at `s` for `replications` independent trees. With `poisson = Some(t)`
/// each tree holds a Poisson(t) number of points instead of `n`.
pub fn cost_samples(
    flavor: TreeFlavor,
    n: usize,
    poisson: Option<f64>,
    s: f64,
    replications: u64,
    seed: u64,
) -> Result<Table> {
    crate::error::check_unit("s", s)?;
    let mut t = Table::new(&["replication", "cost"]);
    for r in 0..replications {
        let mut rng = RngStream::new(seed, r).rng();
        let size = match poisson {
            Some(mean) => sample_poisson_count(mean, &mut rng)?,
            None => n,
        };
        let cost = sample_flavor(flavor, size, &mut rng)?;
        t.push_nums(&[r as f64, cost(s)? as f64]);
    }
    Ok(t)
}

/// Breakpoints and values of the cost profile of one random tree.
pub fn profile_table(flavor: TreeFlavor, n: usize, seed: u64) -> Result<Table> {
    let pts = sample_uniform_points(n, &mut RngStream::new(seed, 0).rng());
    let profile = match flavor {
        TreeFlavor::Quad => QuadTree::build(&pts)?.profile(),
        TreeFlavor::Kd(axis) => KdTree::build(&pts, axis)?.profile(),
    };
    let mut t = Table::new(&["breakpoint", "value"]);
    for (&b, &v) in profile.breakpoints().iter().zip(profile.values()) {
        t.push_nums(&[b, v as f64]);
    }
    let (sup, (lo, hi)) = profile.supremum();
    Ok(t.with_metadata(format!("supremum: {sup} on [{lo}, {hi})")))
}

/// One realization of `Z_n` on `grid_points` equally spaced positions.
pub fn limit_path_table(depth: u32, grid_points: usize, variant: Variant, seed: u64) -> Result<Table> {
    let grid = crate::experiment::uniform_query_grid(grid_points);
    let env = LimitEnvironment::new(seed, 0);
    let z = simulate_path(depth, &grid, &env, variant)?;
    let mut t = Table::new(&["s", "z"]);
    for (s, v) in grid.iter().zip(&z) {
        t.push_nums(&[*s, *v]);
    }
    Ok(t.with_metadata(format!("depth: {depth}")))
}

/// `Z_n(s)` for independent environments `0..replications`.
pub fn limit_samples_table(depth: u32, s: f64, variant: Variant, replications: u64, seed: u64) -> Result<Table> {
    let mut t = Table::new(&["replication", "value"]);
    for r in 0..replications {
        let env = LimitEnvironment::new(seed, r);
        let z = simulate_path(depth, &[s], &env, variant)?[0];
        t.push_nums(&[r as f64, z]);
    }
    Ok(t)
}

/// `W_n` and `L_n` for independent environments.
pub fn diagnostics_table(depth: u32, replications: u64, seed: u64) -> Result<Table> {
    let mut t = Table::new(&["replication", "max_width", "min_gap"]);
    for r in 0..replications {
        let (w, l) = diagnostics(depth, &LimitEnvironment::new(seed, r))?;
        t.push_nums(&[r as f64, w, l]);
    }
    Ok(t)
}
