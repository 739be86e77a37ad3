// Poissonized trees and the coupling that extends the square to the left:
// adding points never removes a crossed horizontal line.

use partial_match::quadtree::{coupled_extension_cost, sample_extended_poisson, sample_poisson_tree};
use partial_match::rng::RngStream;

fn run_example() -> partial_match::Result<()> {
    let (t, eps, s) = (200.0, 0.2, 0.3);
    let mut total = (0, 0);
    for r in 0..200 {
        let points = sample_extended_poisson(t, eps, &mut RngStream::new(5, r).rng())?;
        let (base, extended) = coupled_extension_cost(&points, eps, s)?;
        assert!(base <= extended);
        total.0 += base;
        total.1 += extended;
    }
    println!("mean base cost {:.2}, mean extended cost {:.2}", total.0 as f64 / 200.0, total.1 as f64 / 200.0);

    let tree = sample_poisson_tree(t, &mut RngStream::new(6, 0).rng())?;
    println!("Poisson({t}) tree: {} points, cost at {s} = {}", tree.len(), tree.cost(s)?);
    Ok(())
}

fn main() -> partial_match::Result<()> {
    run_example()
}
