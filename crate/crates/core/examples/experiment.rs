// A seeded Monte Carlo experiment: mean cost profile of random quadtrees,
// normalized by `K1 n^β` and compared with `h(s)`.

use partial_match::experiment::{checks, run_experiment, uniform_query_grid, ExperimentKind, ExperimentSpec};
use partial_match::output::to_csv;

fn run_example() -> partial_match::Result<()> {
    let mut spec = ExperimentSpec::new(ExperimentKind::MeanProfile);
    spec.sizes = vec![2000];
    spec.replications = 200;
    spec.grid = uniform_query_grid(11);
    spec.seed = 42;

    let table = run_experiment(&spec)?;
    print!("{}", to_csv(&table)?);
    for c in checks(&spec, &table)? {
        println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}

fn main() -> partial_match::Result<()> {
    run_example()
}
