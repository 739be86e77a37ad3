// One realization of the limit-process approximant `Z_n` on a grid, in
// gnuplot-ready form, plus the partition diagnostics of its environment.

use partial_match::limitproc::{diagnostics, simulate_path, simulate_pointwise, LimitEnvironment, Variant};
use partial_match::output::{to_plot_data, Table};

fn run_example() -> partial_match::Result<()> {
    let env = LimitEnvironment::new(3, 0);
    let grid: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
    let depth = 12;
    let path = simulate_path(depth, &grid, &env, Variant::Quad)?;
    assert_eq!(path[16], simulate_pointwise(depth, grid[16], &env)?);

    let mut table = Table::new(&["s", "z"]).with_metadata(format!("depth {depth}"));
    for (s, z) in grid.iter().zip(&path) {
        table.push_nums(&[*s, *z]);
    }
    let text = to_plot_data(&table)?;
    println!("{}", text.lines().take(8).collect::<Vec<_>>().join("\n"));

    for n in [2, 4, 6] {
        let (w, l) = diagnostics(n, &env)?;
        println!("level {n}: widest cell {w:.4}, closest boundaries {l:.2e}");
    }
    Ok(())
}

fn main() -> partial_match::Result<()> {
    run_example()
}
