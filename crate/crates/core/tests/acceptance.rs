//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use rand::Rng;

use partial_match::experiment::{run_experiment, run_experiment_with_threads, ExperimentKind, ExperimentSpec};
use partial_match::kdtree::{Axis, KdTree};
use partial_match::limitproc::Variant;
use partial_match::moments::psi_moments;
use partial_match::output::{to_csv, Table};
use partial_match::quadrature::integrate;
use partial_match::quadtree::{sample_uniform_points, QuadTree};
use partial_match::rng::RngStream;
use partial_match::specfun::{beta_fn, constants, h};

const SEED: u64 = 20_240_601;

fn report(id: u32, name: &str, passed: bool, detail: &str, started: Instant) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {id:>2} [{verdict}] {name}: {detail} ({:.1} s)",
        started.elapsed().as_secs_f64()
    );
    assert!(passed, "criterion {id} failed: {detail}");
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn row(table: &Table, i: usize, name: &str) -> f64 {
    table.get(i, name).unwrap_or_else(|| panic!("missing {name}"))
}

#[test]
fn criterion_01_constants() {
    let t = Instant::now();
    let c = constants();
    let (e4, ep, eq) = (
        (c.k4 - 0.447363034).abs(),
        (c.k4_par - 0.69848).abs(),
        (c.k4_perp - 0.77754).abs(),
    );
    report(
        1,
        "K4, K4Par, K4Perp",
        e4 < 1e-6 && ep < 1e-4 && eq < 1e-4,
        &format!("K4={:.10} K4Par={:.6} K4Perp={:.6}", c.k4, c.k4_par, c.k4_perp),
        t,
    );
}

#[test]
fn criterion_02_algebra() {
    let t = Instant::now();
    let c = constants();
    let b = c.beta;
    let quad = b * b + 3.0 * b - 2.0;
    let r_par = rel(c.kappa_par, 13.0 * (3.0 - 5.0 * b) / 2.0 * c.kappa);
    let r_perp = rel(c.kappa_perp, 13.0 * (2.0 * b - 1.0) * c.kappa);
    let r_k1 = rel(c.k1_perp, 2.0 / (1.0 + b) * c.k1_par);
    report(
        2,
        "exponent and 2-d tree constant identities",
        quad.abs() < 1e-14 && r_par < 1e-10 && r_perp < 1e-10 && r_k1 < 1e-10,
        &format!("quadratic residual {quad:.1e}; relative errors {r_par:.1e} {r_perp:.1e} {r_k1:.1e}"),
        t,
    );
}

#[test]
fn criterion_03_moment_recursion() {
    let t = Instant::now();
    let c = constants();
    let b = c.beta;
    let c2_rec = psi_moments(2).unwrap().get(2);
    let c2_closed = 2.0 * beta_fn(b + 1.0, b + 1.0).unwrap() * (2.0 * b + 1.0) / (3.0 * (1.0 - b));
    // integrated identity with both integrals done by quadrature
    let int_m2 = integrate(|s| c2_rec * h(s).unwrap().powi(2), 0.0, 1.0, 1e-14).unwrap();
    let int_h = integrate(|s| h(s).unwrap(), 0.0, 1.0, 1e-14).unwrap();
    let k3_quad = int_m2 - int_h * int_h;
    let (e_c2, e_k3) = ((c2_rec - c2_closed).abs(), (k3_quad - c.k3).abs());
    report(
        3,
        "c2 recursion vs closed form; K3 identity",
        e_c2 < 1e-10 && e_k3 < 1e-10,
        &format!("c2 {c2_rec:.12} (diff {e_c2:.1e}); K3 {k3_quad:.12} (diff {e_k3:.1e})"),
        t,
    );
}

#[test]
fn criterion_04_oracle_equivalence() {
    let t = Instant::now();
    let mut mismatches = 0u64;
    let mut checked = 0u64;
    for r in 0..1000 {
        let mut rng = RngStream::new(SEED, r).rng();
        let n = rng.random_range(0..=50);
        let pts = sample_uniform_points(n, &mut rng);
        let tree = QuadTree::build(&pts).unwrap();
        let prof = tree.profile();
        for _ in 0..20 {
            let s: f64 = rng.random();
            let c = tree.cost(s).unwrap();
            checked += 1;
            if c != tree.horizontal_crossings(s).unwrap() || c != prof.eval(s).unwrap() {
                mismatches += 1;
            }
        }
    }
    let mut sup_mismatch = 0;
    for r in 0..100 {
        let mut rng = RngStream::new(SEED + 1, r).rng();
        let n = rng.random_range(1..=100);
        let pts = sample_uniform_points(n, &mut rng);
        let tree = QuadTree::build(&pts).unwrap();
        let grid = (0..=10_000).map(|i| i as f64 / 10_000.0);
        let best = grid
            .chain(tree.profile().breakpoints().iter().copied())
            .map(|s| tree.cost(s).unwrap())
            .max()
            .unwrap();
        if best != tree.supremum().0 {
            sup_mismatch += 1;
        }
    }
    report(
        4,
        "cost = crossings = profile; supremum = dense-grid max",
        mismatches == 0 && sup_mismatch == 0,
        &format!("{mismatches}/{checked} query mismatches, {sup_mismatch}/100 supremum mismatches"),
        t,
    );
}

fn limit_spec(depths: Vec<u32>, s: f64, m: u64, variant: Variant, seed: u64) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(ExperimentKind::LimitMoments);
    spec.depths = depths;
    spec.s = s;
    spec.replications = m;
    spec.variant = variant;
    spec.seed = seed;
    spec
}

#[test]
fn criterion_05_exact_mean_of_approximant() {
    let t = Instant::now();
    let table = run_experiment(&limit_spec(vec![12], 0.5, 100_000, Variant::Quad, SEED)).unwrap();
    let hs = h(0.5).unwrap();
    let mean = row(&table, 0, "mean") * hs;
    let se = row(&table, 0, "mean_se") * hs;
    report(
        5,
        "E Z_12(0.5) = h(0.5)",
        (mean - hs).abs() <= 3.0 * se,
        &format!("mean {mean:.6} vs {hs:.6}, se {se:.1e}, z = {:.2}", (mean - hs) / se),
        t,
    );
}

#[test]
fn criterion_06_variance_oracle() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for s in [0.25, 0.5] {
        let table = run_experiment(&limit_spec(vec![3, 6, 10], s, 100_000, Variant::Quad, SEED + 6)).unwrap();
        for i in 0..3 {
            let (v, se, o) = (
                row(&table, i, "variance"),
                row(&table, i, "variance_se"),
                row(&table, i, "variance_oracle"),
            );
            ok &= (v - o).abs() <= 3.0 * se;
            detail.push(format!("n={} s={s}: z={:.2}", row(&table, i, "depth"), (v - o) / se));
        }
    }
    report(6, "Var Z_n(s) = K^n(h²)(s) − h(s)²", ok, &detail.join(", "), t);
}

#[test]
fn criterion_07_mean_cost_law() {
    let t = Instant::now();
    let mut spec = ExperimentSpec::new(ExperimentKind::VarianceUniformQuery);
    spec.sizes = vec![5000];
    spec.replications = 2000;
    spec.seed = SEED + 7;
    let uq = run_experiment(&spec).unwrap();
    let (mean, se, target) = (row(&uq, 0, "mean_cost"), row(&uq, 0, "mean_cost_se"), row(&uq, 0, "mean_target"));
    let uniform_ok = (mean - target).abs() <= (3.0 * se).max(0.05 * target);

    let mut spec = ExperimentSpec::new(ExperimentKind::MeanProfile);
    spec.sizes = vec![500, 5000, 50_000];
    spec.grid = vec![0.5];
    spec.replications = 8000;
    spec.seed = SEED + 70;
    let mp = run_experiment(&spec).unwrap();
    let norm = mp.column("normalized").unwrap();
    let (last, last_se, hs) = (norm[2], row(&mp, 2, "normalized_se"), row(&mp, 2, "h"));
    let at_half_ok = (last - hs).abs() <= (3.0 * last_se).max(0.10 * hs);
    let increasing = norm.windows(2).all(|w| w[0] < w[1]);
    let steps: Vec<String> = (1..3)
        .map(|i| format!("{:+.4} (z={:.1})", row(&mp, i, "step"), row(&mp, i, "step") / row(&mp, i, "step_se")))
        .collect();
    report(
        7,
        "mean cost at uniform and central queries",
        uniform_ok && at_half_ok && increasing,
        &format!(
            "E C(ξ) {mean:.2} vs {target:.2} ({:+.2}%); normalized at 0.5 {norm:.4?} vs h {hs:.4}; paired steps {}",
            100.0 * (mean - target) / target,
            steps.join(", ")
        ),
        t,
    );
}

#[test]
fn criterion_08_variance_law() {
    let t = Instant::now();
    let mut spec = ExperimentSpec::new(ExperimentKind::VarianceUniformQuery);
    spec.sizes = vec![500, 2000, 8000];
    spec.replications = 20_000;
    spec.seed = SEED + 8;
    let table = run_experiment(&spec).unwrap();
    let vn = table.column("var_normalized").unwrap();
    let k4 = constants().k4;
    let increasing = vn.windows(2).all(|w| w[0] < w[1]);
    let below = vn.iter().all(|&v| v < k4 * 1.2);
    let near = rel(vn[2], k4) <= 0.20;
    let steps: Vec<String> = (1..3)
        .map(|i| format!("z={:.1}", row(&table, i, "step") / row(&table, i, "step_se")))
        .collect();
    report(
        8,
        "Var C_n(ξ)/n^{2β} trends to K4",
        increasing && below && near,
        &format!("{vn:.4?} vs K4 {k4:.6}; final off by {:.1}%; paired steps {}", 100.0 * rel(vn[2], k4), steps.join(", ")),
        t,
    );
}

#[test]
fn criterion_09_supremum_bounded() {
    let t = Instant::now();
    let mut spec = ExperimentSpec::new(ExperimentKind::Supremum);
    spec.sizes = vec![500, 2000, 8000];
    spec.replications = 2000;
    spec.seed = SEED + 9;
    let table = run_experiment(&spec).unwrap();
    let v = table.column("normalized").unwrap();
    let (lo, hi) = v.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    let sup_h = h(0.5).unwrap();
    report(
        9,
        "E S_n/(K1 n^β) bounded and above sup h",
        hi / lo - 1.0 < 0.25 && lo > sup_h,
        &format!("{v:.4?}, spread {:.1}%, sup h {sup_h:.4}", 100.0 * (hi / lo - 1.0)),
        t,
    );
}

#[test]
fn criterion_10_kd_tree_laws() {
    let t = Instant::now();
    let mut spec = ExperimentSpec::new(ExperimentKind::KdMean);
    spec.sizes = vec![5000];
    spec.replications = 2000;
    spec.seed = SEED + 10;
    let table = run_experiment(&spec).unwrap();
    let (m_par, se_par, t_par) = (row(&table, 0, "mean_cost"), row(&table, 0, "mean_cost_se"), row(&table, 0, "target"));
    let (m_perp, t_perp) = (row(&table, 1, "mean_cost"), row(&table, 1, "target"));
    let par_ok = (m_par - t_par).abs() <= (3.0 * se_par).max(0.05 * t_par);
    let perp_ok = rel(m_perp, t_perp) <= 0.05;

    let mut failures = 0;
    for r in 0..10_000 {
        let mut rng = RngStream::new(SEED + 100, r).rng();
        let n = rng.random_range(1..=100);
        let pts = sample_uniform_points(n, &mut rng);
        let s: f64 = rng.random();
        if !KdTree::build(&pts, Axis::Horizontal).unwrap().decomposition_check(s).unwrap() {
            failures += 1;
        }
    }
    report(
        10,
        "2-d tree mean laws and decomposition",
        par_ok && perp_ok && failures == 0,
        &format!(
            "parallel {m_par:.2} vs {t_par:.2} ({:+.2}%), perpendicular {m_perp:.2} vs {t_perp:.2} ({:+.2}%), {failures}/10000 decomposition failures",
            100.0 * (m_par - t_par) / t_par,
            100.0 * (m_perp - t_perp) / t_perp
        ),
        t,
    );
}

#[test]
fn criterion_11_coupling() {
    let t = Instant::now();
    let mut spec = ExperimentSpec::new(ExperimentKind::Coupling);
    spec.t = 100.0;
    spec.epsilon = 0.1;
    spec.s = 0.3;
    spec.replications = 10_000;
    spec.seed = SEED + 11;
    let table = run_experiment(&spec).unwrap();
    let violations = row(&table, 0, "violations");
    spec.epsilon = 0.0;
    spec.replications = 2000;
    let zero = run_experiment(&spec).unwrap();
    let (eq, viol0) = (row(&zero, 0, "equalities"), row(&zero, 0, "violations"));
    report(
        11,
        "pathwise monotone coupling",
        violations == 0.0 && eq == 2000.0 && viol0 == 0.0,
        &format!("{violations} violations in 10000; ε=0: {eq} of 2000 equal"),
        t,
    );
}

#[test]
fn criterion_12_marginal_law() {
    let t = Instant::now();
    let kd = run_experiment(&limit_spec(vec![10], 0.4, 100_000, Variant::Kd, SEED + 12)).unwrap();
    let quad = run_experiment(&limit_spec(vec![10], 0.4, 100_000, Variant::Quad, SEED + 13)).unwrap();
    let m2_oracle = row(&kd, 0, "m2_oracle");
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, tab) in [("kd", &kd), ("quad", &quad)] {
        let (m1, m1se, m2, m2se) = (row(tab, 0, "mean"), row(tab, 0, "mean_se"), row(tab, 0, "m2"), row(tab, 0, "m2_se"));
        ok &= (m1 - 1.0).abs() <= 3.0 * m1se && (m2 - m2_oracle).abs() <= 3.0 * m2se;
        detail.push(format!("{name}: m1 {m1:.4} m2 {m2:.4}"));
    }
    for col in ["mean", "m2"] {
        let (a, b) = (row(&kd, 0, col), row(&quad, 0, col));
        let se = (row(&kd, 0, &format!("{col}_se")).powi(2) + row(&quad, 0, &format!("{col}_se")).powi(2)).sqrt();
        ok &= (a - b).abs() <= 3.0 * se;
    }
    report(
        12,
        "Z_10^= and Z_10 share one-dimensional moments",
        ok,
        &format!("{}; oracle m2 {m2_oracle:.4}", detail.join(", ")),
        t,
    );
}

#[test]
fn criterion_13_determinism() {
    let t = Instant::now();
    let mut all_equal = true;
    for kind in [ExperimentKind::MeanProfile, ExperimentKind::LimitMoments, ExperimentKind::Supremum] {
        let mut spec = ExperimentSpec::new(kind);
        spec.replications = 300;
        spec.sizes = vec![200, 1000];
        spec.depths = vec![6];
        spec.seed = SEED + 13;
        let outputs: Vec<String> = [1, 2, 4]
            .iter()
            .map(|&k| to_csv(&run_experiment_with_threads(&spec, k).unwrap()).unwrap())
            .collect();
        all_equal &= outputs.windows(2).all(|w| w[0] == w[1]);
    }
    report(13, "byte-identical output across thread counts", all_equal, "1, 2 and 4 threads", t);
}
