//! Seeded Monte Carlo experiments.
//!
//! Replication `r` draws from the stream `(seed, r)`; a second independent
//! family, where needed, uses streams `M + r`. Replications run on the rayon
//! pool and are collected in index order, so every aggregate is the same
//! under any schedule or thread count.
//!
//! Experiments over several sizes build one tree on the largest size per
//! replication and read the smaller sizes off its insertion prefixes. Each
//! size then has its exact marginal law while differences between sizes
//! are estimated from paired samples.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kdtree::{Axis, KdTree};
use crate::limitproc::{simulate_pointwise, simulate_pointwise_2d, LimitEnvironment, Variant, MAX_POINTWISE_DEPTH};
use crate::moments::{apply_k, GridFunction, DEFAULT_GRID_POINTS};
use crate::output::{Table, Value};
use crate::quadtree::{
    coupled_extension_cost, sample_extended_poisson, sample_poisson_tree, sample_uniform_points, QuadTree,
};
use crate::rng::{RngStream, GENERATOR};
use crate::specfun::{constants, h_unchecked};
use crate::stats::{aggregate, variance_with_error, SampleStats};

pub const MAX_REPLICATIONS: u64 = 10_000_000;
pub const MAX_POINTS: usize = 5_000_000;
pub const MAX_POISSON_MEAN: f64 = 5.0e6;
pub const MAX_QUERY_GRID: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    MeanProfile,
    VarianceUniformQuery,
    Supremum,
    LimitMoments,
    Coupling,
    KdMean,
    PoissonMean,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::MeanProfile,
        ExperimentKind::VarianceUniformQuery,
        ExperimentKind::Supremum,
        ExperimentKind::LimitMoments,
        ExperimentKind::Coupling,
        ExperimentKind::KdMean,
        ExperimentKind::PoissonMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::MeanProfile => "mean-profile",
            ExperimentKind::VarianceUniformQuery => "variance-uniform-query",
            ExperimentKind::Supremum => "supremum",
            ExperimentKind::LimitMoments => "limit-moments",
            ExperimentKind::Coupling => "coupling",
            ExperimentKind::KdMean => "kd-mean",
            ExperimentKind::PoissonMean => "poisson-mean",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown experiment kind '{s}'")))
    }
}

/// Tree family used by the tree-based kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeFlavor {
    Quad,
    Kd(Axis),
}

impl TreeFlavor {
    /// Leading constant `K` of the mean profile `K n^β h(s)`.
    pub fn profile_constant(self) -> f64 {
        let c = constants();
        match self {
            TreeFlavor::Quad => c.k1,
            TreeFlavor::Kd(Axis::Vertical) => c.k1_par,
            TreeFlavor::Kd(Axis::Horizontal) => c.k1_perp,
        }
    }

    /// Asymptotic mean at a uniform query: `κ n^β − offset`.
    pub fn uniform_mean(self, n: f64) -> f64 {
        let c = constants();
        let (kappa, offset) = match self {
            TreeFlavor::Quad => (c.kappa, 1.0),
            TreeFlavor::Kd(Axis::Vertical) => (c.kappa_par, 2.0),
            TreeFlavor::Kd(Axis::Horizontal) => (c.kappa_perp, 3.0),
        };
        kappa * n.powf(c.beta) - offset
    }
}

/// Parameters of one experiment. Fields a kind does not use are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    /// Tree sizes, increasing.
    pub sizes: Vec<usize>,
    /// Poisson intensity.
    pub t: f64,
    pub replications: u64,
    /// Query positions for `mean-profile`.
    pub grid: Vec<f64>,
    /// Fixed query position.
    pub s: f64,
    /// Approximant levels for `limit-moments`.
    pub depths: Vec<u32>,
    pub epsilon: f64,
    pub seed: u64,
    pub tree: TreeFlavor,
    pub variant: Variant,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Defaults for `kind`.
    pub fn new(kind: ExperimentKind) -> Self {
        let base = ExperimentSpec {
            kind,
            sizes: vec![5000],
            t: 2000.0,
            replications: 1000,
            grid: uniform_query_grid(21),
            s: 0.5,
            depths: vec![4, 8, 12],
            epsilon: 0.1,
            seed: 1,
            tree: TreeFlavor::Quad,
            variant: Variant::Quad,
            output: None,
        };
        match kind {
            ExperimentKind::MeanProfile => ExperimentSpec {
                replications: 500,
                ..base
            },
            ExperimentKind::VarianceUniformQuery => ExperimentSpec {
                sizes: vec![500, 2000, 8000],
                replications: 5000,
                ..base
            },
            ExperimentKind::Supremum => ExperimentSpec {
                sizes: vec![500, 2000, 8000],
                ..base
            },
            ExperimentKind::LimitMoments => ExperimentSpec {
                replications: 10_000,
                ..base
            },
            ExperimentKind::Coupling => ExperimentSpec {
                t: 100.0,
                s: 0.3,
                replications: 10_000,
                ..base
            },
            ExperimentKind::KdMean => ExperimentSpec {
                replications: 2000,
                ..base
            },
            ExperimentKind::PoissonMean => ExperimentSpec {
                replications: 2000,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        cap("replications", self.replications, 1, MAX_REPLICATIONS)?;
        let needs_sizes = matches!(
            self.kind,
            ExperimentKind::MeanProfile
                | ExperimentKind::VarianceUniformQuery
                | ExperimentKind::Supremum
                | ExperimentKind::KdMean
        );
        if needs_sizes {
            if self.sizes.is_empty() || !self.sizes.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidSpec("sizes must be a non-empty increasing list".into()));
            }
            if self.sizes[0] == 0 {
                return Err(Error::InvalidSpec("sizes must be positive".into()));
            }
            let largest = *self.sizes.last().expect("non-empty");
            cap("points", largest as u64, 1, MAX_POINTS as u64)?;
        }
        match self.kind {
            ExperimentKind::MeanProfile => {
                if self.grid.is_empty() || !self.grid.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::InvalidGrid("query grid must be non-empty and increasing"));
                }
                if self.grid.len() > MAX_QUERY_GRID {
                    return Err(Error::CapExceeded {
                        what: "query grid",
                        value: self.grid.len() as u64,
                        cap: MAX_QUERY_GRID as u64,
                    });
                }
                for &s in &self.grid {
                    crate::error::check_unit("s", s)?;
                }
            }
            ExperimentKind::LimitMoments => {
                if !(self.s > 0.0 && self.s < 1.0) {
                    return Err(Error::Domain {
                        name: "s",
                        value: self.s,
                        domain: "(0, 1)",
                    });
                }
                if self.depths.is_empty() || !self.depths.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::InvalidSpec("depths must be a non-empty increasing list".into()));
                }
                let deepest = *self.depths.last().expect("non-empty");
                cap("depth", u64::from(deepest), 0, u64::from(MAX_POINTWISE_DEPTH))?;
                cap("depth", u64::from(deepest), 0, crate::moments::MAX_ITERATES as u64)?;
            }
            ExperimentKind::Coupling | ExperimentKind::PoissonMean => {
                if !(self.t >= 0.0 && self.t.is_finite()) {
                    return Err(Error::Domain {
                        name: "t",
                        value: self.t,
                        domain: "[0, inf)",
                    });
                }
                let scaled = self.t * (1.0 + self.epsilon.max(0.0));
                if scaled > MAX_POISSON_MEAN {
                    return Err(Error::CapExceeded {
                        what: "poisson mean",
                        value: scaled as u64,
                        cap: MAX_POISSON_MEAN as u64,
                    });
                }
                if self.kind == ExperimentKind::Coupling {
                    crate::error::check_unit("s", self.s)?;
                    crate::quadtree::extended_box(self.epsilon)?;
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn cap(what: &'static str, value: u64, min: u64, max: u64) -> Result<()> {
    if value < min {
        return Err(Error::InvalidSpec(format!("{what} must be at least {min}")));
    }
    if value > max {
        return Err(Error::CapExceeded { what, value, cap: max });
    }
    Ok(())
}

/// `points` equally spaced query positions covering `[0, 1]`.
pub fn uniform_query_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..points).map(|i| i as f64 / (points - 1) as f64).collect(),
    }
}

/// Runs `job` for replications `0..m` and returns their outputs in index order.
fn replicate<F>(m: u64, job: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync + Send,
{
    (0..m).into_par_iter().map(job).collect()
}

fn column(obs: &[Vec<f64>], j: usize) -> Vec<f64> {
    obs.iter().map(|row| row[j]).collect()
}

/// Mean and standard error of `b − a` over paired samples.
fn paired_step(a: &[f64], b: &[f64]) -> Result<SampleStats> {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    aggregate(&d)
}

fn metadata(spec: &ExperimentSpec, table: Table) -> Table {
    table
        .with_metadata(format!("kind: {}", spec.kind))
        .with_metadata(format!("seed: {} replications: {}", spec.seed, spec.replications))
        .with_metadata(format!("generator: {GENERATOR}"))
}

/// Runs the experiment on the current rayon pool.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Table> {
    spec.validate()?;
    let table = match spec.kind {
        ExperimentKind::MeanProfile => mean_profile(spec)?,
        ExperimentKind::VarianceUniformQuery => variance_uniform_query(spec)?,
        ExperimentKind::Supremum => supremum(spec)?,
        ExperimentKind::LimitMoments => limit_moments(spec)?,
        ExperimentKind::Coupling => coupling(spec)?,
        ExperimentKind::KdMean => kd_mean(spec)?,
        ExperimentKind::PoissonMean => poisson_mean(spec)?,
    };
    Ok(metadata(spec, table))
}

/// Runs the experiment on a dedicated pool of `threads` workers (0 = rayon default).
pub fn run_experiment_with_threads(spec: &ExperimentSpec, threads: usize) -> Result<Table> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(spec))
}

enum AnyTree {
    Quad(QuadTree),
    Kd(KdTree),
}

impl AnyTree {
    fn sample<R: Rng + ?Sized>(flavor: TreeFlavor, n: usize, rng: &mut R) -> AnyTree {
        let pts = sample_uniform_points(n, rng);
        match flavor {
            TreeFlavor::Quad => AnyTree::Quad(QuadTree::build_unchecked(crate::geometry::Cell::UNIT, &pts)),
            TreeFlavor::Kd(axis) => AnyTree::Kd(KdTree::build_unchecked(&pts, axis)),
        }
    }

    fn prefix_cost(&self, len: usize, s: f64) -> Result<u64> {
        match self {
            AnyTree::Quad(t) => t.prefix_cost(len, s),
            AnyTree::Kd(t) => t.prefix_cost(len, s),
        }
    }

    fn prefix_profile(&self, len: usize) -> crate::profile::StepProfile {
        match self {
            AnyTree::Quad(t) => t.prefix_profile(len),
            AnyTree::Kd(t) => t.prefix_profile(len),
        }
    }
}

fn scale(flavor: TreeFlavor, n: usize) -> f64 {
    flavor.profile_constant() * (n as f64).powf(constants().beta)
}

fn mean_profile(spec: &ExperimentSpec) -> Result<Table> {
    let largest = *spec.sizes.last().expect("validated");
    let obs = replicate(spec.replications, |r| {
        let tree = AnyTree::sample(spec.tree, largest, &mut RngStream::new(spec.seed, r).rng());
        let mut out = Vec::with_capacity(spec.sizes.len() * spec.grid.len());
        for &n in &spec.sizes {
            let prof = tree.prefix_profile(n);
            for &s in &spec.grid {
                out.push(prof.eval(s)? as f64);
            }
        }
        Ok(out)
    })?;
    let mut table = Table::new(&[
        "n",
        "s",
        "mean_cost",
        "mean_cost_se",
        "normalized",
        "normalized_se",
        "h",
        "step",
        "step_se",
    ]);
    let g = spec.grid.len();
    for (i, &n) in spec.sizes.iter().enumerate() {
        let k = scale(spec.tree, n);
        for (j, &s) in spec.grid.iter().enumerate() {
            let raw = column(&obs, i * g + j);
            let st = aggregate(&raw)?;
            let (step, step_se) = if i == 0 {
                (f64::NAN, f64::NAN)
            } else {
                let kp = scale(spec.tree, spec.sizes[i - 1]);
                let prev: Vec<f64> = column(&obs, (i - 1) * g + j).iter().map(|c| c / kp).collect();
                let cur: Vec<f64> = raw.iter().map(|c| c / k).collect();
                let d = paired_step(&prev, &cur)?;
                (d.mean, d.std_error)
            };
            table.push_nums(&[
                n as f64,
                s,
                st.mean,
                st.std_error,
                st.mean / k,
                st.std_error / k,
                h_unchecked(s),
                step,
                step_se,
            ]);
        }
    }
    Ok(table)
}

fn variance_uniform_query(spec: &ExperimentSpec) -> Result<Table> {
    let largest = *spec.sizes.last().expect("validated");
    let beta = constants().beta;
    let obs = replicate(spec.replications, |r| {
        let mut rng = RngStream::new(spec.seed, r).rng();
        let tree = AnyTree::sample(spec.tree, largest, &mut rng);
        let xi: f64 = rng.random();
        spec.sizes.iter().map(|&n| Ok(tree.prefix_cost(n, xi)? as f64)).collect()
    })?;
    let mut table = Table::new(&[
        "n",
        "mean_cost",
        "mean_cost_se",
        "mean_target",
        "variance",
        "variance_se",
        "var_normalized",
        "var_normalized_se",
        "k4",
        "step",
        "step_se",
    ]);
    let mut prev: Option<(Vec<f64>, f64)> = None;
    for (i, &n) in spec.sizes.iter().enumerate() {
        let scale2 = (n as f64).powf(2.0 * beta);
        let x: Vec<f64> = column(&obs, i).iter().map(|c| c / scale2.sqrt()).collect();
        let raw = column(&obs, i);
        let st = aggregate(&raw)?;
        let (var, var_se) = variance_with_error(&raw)?;
        let (vn, _) = variance_with_error(&x)?;
        let (step, step_se) = match &prev {
            None => (f64::NAN, f64::NAN),
            Some((px, pv)) => {
                let pm = aggregate(px)?.mean;
                let xm = aggregate(&x)?.mean;
                let d: Vec<f64> = x.iter().zip(px).map(|(a, b)| (a - xm).powi(2) - (b - pm).powi(2)).collect();
                (vn - pv, aggregate(&d)?.std_error)
            }
        };
        table.push_nums(&[
            n as f64,
            st.mean,
            st.std_error,
            spec.tree.uniform_mean(n as f64),
            var,
            var_se,
            vn,
            var_se / scale2,
            constants().k4,
            step,
            step_se,
        ]);
        prev = Some((x, vn));
    }
    Ok(table)
}

fn supremum(spec: &ExperimentSpec) -> Result<Table> {
    let largest = *spec.sizes.last().expect("validated");
    let obs = replicate(spec.replications, |r| {
        let tree = AnyTree::sample(spec.tree, largest, &mut RngStream::new(spec.seed, r).rng());
        Ok(spec.sizes.iter().map(|&n| tree.prefix_profile(n).supremum().0 as f64).collect())
    })?;
    let mut table = Table::new(&["n", "mean_sup", "mean_sup_se", "normalized", "normalized_se", "sup_h"]);
    let sup_h = h_unchecked(0.5);
    for (i, &n) in spec.sizes.iter().enumerate() {
        let st = aggregate(&column(&obs, i))?;
        let k = scale(spec.tree, n);
        table.push_nums(&[n as f64, st.mean, st.std_error, st.mean / k, st.std_error / k, sup_h]);
    }
    Ok(table)
}

/// `K^n(h²)` at `s` for each requested `n`.
fn second_moment_oracle(depths: &[u32], s: f64) -> Result<Vec<f64>> {
    let mut m = GridFunction::sample(DEFAULT_GRID_POINTS, |t| h_unchecked(t).powi(2))?;
    let mut level = 0;
    let mut out = Vec::with_capacity(depths.len());
    for &d in depths {
        while level < d {
            m = apply_k(&m)?;
            level += 1;
        }
        out.push(m.eval(s));
    }
    Ok(out)
}

fn limit_moments(spec: &ExperimentSpec) -> Result<Table> {
    let s = spec.s;
    let hs = h_unchecked(s);
    let obs = replicate(spec.replications, |r| {
        let env = LimitEnvironment::new(spec.seed, r);
        spec.depths
            .iter()
            .map(|&d| match spec.variant {
                Variant::Quad => simulate_pointwise(d, s, &env),
                Variant::Kd => simulate_pointwise_2d(d, s, &env),
            })
            .collect()
    })?;
    let oracle = second_moment_oracle(&spec.depths, s)?;
    let c = crate::moments::psi_moments(3)?;
    let mut table = Table::new(&[
        "depth",
        "s",
        "mean",
        "mean_se",
        "m2",
        "m2_se",
        "m2_oracle",
        "m3",
        "m3_se",
        "variance",
        "variance_se",
        "variance_oracle",
        "c2",
        "c3",
    ]);
    for (i, &d) in spec.depths.iter().enumerate() {
        let z = column(&obs, i);
        let ratio: Vec<f64> = z.iter().map(|v| v / hs).collect();
        let m1 = aggregate(&ratio)?;
        let m2 = aggregate(&ratio.iter().map(|v| v * v).collect::<Vec<_>>())?;
        let m3 = aggregate(&ratio.iter().map(|v| v * v * v).collect::<Vec<_>>())?;
        let (var, var_se) = variance_with_error(&z)?;
        table.push_nums(&[
            f64::from(d),
            s,
            m1.mean,
            m1.std_error,
            m2.mean,
            m2.std_error,
            oracle[i] / (hs * hs),
            m3.mean,
            m3.std_error,
            var,
            var_se,
            oracle[i] - hs * hs,
            c.get(2),
            c.get(3),
        ]);
    }
    Ok(table)
}

fn coupling(spec: &ExperimentSpec) -> Result<Table> {
    let (t, eps, s, m) = (spec.t, spec.epsilon, spec.s, spec.replications);
    let coupled = replicate(m, |r| {
        let pts = sample_extended_poisson(t, eps, &mut RngStream::new(spec.seed, r).rng())?;
        let (base, ext) = coupled_extension_cost(&pts, eps, s)?;
        Ok(vec![base as f64, ext as f64])
    })?;
    let direct = replicate(m, |r| {
        let tree = sample_poisson_tree(t * (1.0 + eps), &mut RngStream::new(spec.seed, m + r).rng())?;
        Ok(vec![tree.cost((s + eps) / (1.0 + eps))? as f64])
    })?;
    let base = column(&coupled, 0);
    let ext = column(&coupled, 1);
    let violations = base.iter().zip(&ext).filter(|(b, e)| b > e).count();
    let equalities = base.iter().zip(&ext).filter(|(b, e)| b == e).count();
    let (bs, es, ds) = (aggregate(&base)?, aggregate(&ext)?, aggregate(&column(&direct, 0))?);
    let mut table = Table::new(&[
        "t",
        "epsilon",
        "s",
        "mean_base",
        "mean_base_se",
        "mean_extended",
        "mean_extended_se",
        "violations",
        "equalities",
        "mean_direct",
        "mean_direct_se",
    ]);
    table.push_nums(&[
        t,
        eps,
        s,
        bs.mean,
        bs.std_error,
        es.mean,
        es.std_error,
        violations as f64,
        equalities as f64,
        ds.mean,
        ds.std_error,
    ]);
    Ok(table)
}

fn kd_mean(spec: &ExperimentSpec) -> Result<Table> {
    let largest = *spec.sizes.last().expect("validated");
    let m = spec.replications;
    let axes = [Axis::Vertical, Axis::Horizontal];
    let mut table = Table::new(&[
        "root_axis",
        "n",
        "mean_cost",
        "mean_cost_se",
        "target",
        "rel_error",
    ]);
    for (a, &axis) in axes.iter().enumerate() {
        let flavor = TreeFlavor::Kd(axis);
        let obs = replicate(m, |r| {
            let mut rng = RngStream::new(spec.seed, a as u64 * m + r).rng();
            let tree = AnyTree::sample(flavor, largest, &mut rng);
            let xi: f64 = rng.random();
            spec.sizes.iter().map(|&n| Ok(tree.prefix_cost(n, xi)? as f64)).collect()
        })?;
        for (i, &n) in spec.sizes.iter().enumerate() {
            let st = aggregate(&column(&obs, i))?;
            let target = flavor.uniform_mean(n as f64);
            table.push(vec![
                Value::Text(axis.to_string()),
                n.into(),
                st.mean.into(),
                st.std_error.into(),
                target.into(),
                ((st.mean - target) / target).into(),
            ]);
        }
    }
    Ok(table)
}

fn poisson_mean(spec: &ExperimentSpec) -> Result<Table> {
    let t = spec.t;
    let obs = replicate(spec.replications, |r| {
        let mut rng = RngStream::new(spec.seed, r).rng();
        let tree = sample_poisson_tree(t, &mut rng)?;
        let xi: f64 = rng.random();
        Ok(vec![tree.len() as f64, tree.cost(xi)? as f64])
    })?;
    let count = aggregate(&column(&obs, 0))?;
    let cost = aggregate(&column(&obs, 1))?;
    let target = TreeFlavor::Quad.uniform_mean(t);
    let mut table = Table::new(&["t", "mean_count", "mean_cost", "mean_cost_se", "target", "rel_error"]);
    table.push_nums(&[t, count.mean, cost.mean, cost.std_error, target, (cost.mean - target) / target]);
    Ok(table)
}

/// One named pass/fail verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

fn within(value: f64, target: f64, se: f64, rel: f64) -> bool {
    (value - target).abs() <= (3.0 * se).max(rel * target.abs())
}

/// Tolerance checks for a finished experiment table.
pub fn checks(spec: &ExperimentSpec, table: &Table) -> Result<Vec<Check>> {
    let col = |name: &str| {
        table
            .column(name)
            .ok_or_else(|| Error::InvalidSpec(format!("table lacks column {name}")))
    };
    let mut out = Vec::new();
    match spec.kind {
        ExperimentKind::MeanProfile => {
            let (n, s, v, se, h) = (col("n")?, col("s")?, col("normalized")?, col("normalized_se")?, col("h")?);
            let largest = *spec.sizes.last().expect("validated") as f64;
            for i in 0..n.len() {
                if n[i] == largest && s[i] > 0.0 && s[i] < 1.0 {
                    out.push(check(
                        format!("normalized mean at s={}", s[i]),
                        within(v[i], h[i], se[i], 0.10),
                        format!("{:.5} vs h = {:.5} (se {:.2e})", v[i], h[i], se[i]),
                    ));
                }
            }
        }
        ExperimentKind::VarianceUniformQuery => {
            let (vn, k4) = (col("var_normalized")?, constants().k4);
            let last = *vn.last().expect("non-empty");
            out.push(check(
                "normalized variance near K4",
                (last - k4).abs() <= 0.2 * k4,
                format!("{last:.5} vs {k4:.9}"),
            ));
            out.push(check(
                "normalized variance increasing",
                vn.windows(2).all(|w| w[0] < w[1]),
                format!("{vn:?}"),
            ));
        }
        ExperimentKind::Supremum => {
            let v = col("normalized")?;
            let (lo, hi) = v.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
            let sup_h = h_unchecked(0.5);
            out.push(check("bounded variation", hi / lo - 1.0 < 0.25, format!("range [{lo:.4}, {hi:.4}]")));
            out.push(check("exceeds sup h", lo > sup_h, format!("{lo:.4} vs {sup_h:.6}")));
        }
        ExperimentKind::LimitMoments => {
            let (d, mean, mse, m2, m2se, m2o) = (
                col("depth")?,
                col("mean")?,
                col("mean_se")?,
                col("m2")?,
                col("m2_se")?,
                col("m2_oracle")?,
            );
            for i in 0..d.len() {
                out.push(check(
                    format!("mean ratio at depth {}", d[i]),
                    (mean[i] - 1.0).abs() <= 3.0 * mse[i],
                    format!("{:.5} (se {:.2e})", mean[i], mse[i]),
                ));
                out.push(check(
                    format!("second moment at depth {}", d[i]),
                    (m2[i] - m2o[i]).abs() <= 3.0 * m2se[i],
                    format!("{:.5} vs oracle {:.5} (se {:.2e})", m2[i], m2o[i], m2se[i]),
                ));
            }
        }
        ExperimentKind::Coupling => {
            let viol = col("violations")?[0];
            out.push(check("pathwise monotone", viol == 0.0, format!("{viol} violations")));
            let (e, ese, d, dse) = (
                col("mean_extended")?[0],
                col("mean_extended_se")?[0],
                col("mean_direct")?[0],
                col("mean_direct_se")?[0],
            );
            let comb = (ese * ese + dse * dse).sqrt();
            out.push(check(
                "rescaling identity",
                (e - d).abs() <= 3.0 * comb,
                format!("{e:.4} vs {d:.4} (se {comb:.2e})"),
            ));
            if spec.epsilon == 0.0 {
                let eq = col("equalities")?[0];
                out.push(check(
                    "equality at zero extension",
                    eq == spec.replications as f64,
                    format!("{eq} equal"),
                ));
            }
        }
        ExperimentKind::KdMean => {
            let (mean, se, target) = (col("mean_cost")?, col("mean_cost_se")?, col("target")?);
            for i in 0..mean.len() {
                out.push(check(
                    format!("kd mean row {i}"),
                    within(mean[i], target[i], se[i], 0.05),
                    format!("{:.3} vs {:.3}", mean[i], target[i]),
                ));
            }
        }
        ExperimentKind::PoissonMean => {
            let (mean, se, target) = (col("mean_cost")?[0], col("mean_cost_se")?[0], col("target")?[0]);
            out.push(check(
                "poisson mean",
                within(mean, target, se, 0.05),
                format!("{mean:.3} vs {target:.3}"),
            ));
        }
    }
    Ok(out)
}
