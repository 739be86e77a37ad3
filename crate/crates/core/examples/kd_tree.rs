// 2-d trees with the root split parallel or perpendicular to the query
// line, and the one-level decompositions linking the two costs.

use partial_match::experiment::TreeFlavor;
use partial_match::kdtree::{Axis, KdTree};
use partial_match::quadtree::sample_uniform_points;
use partial_match::rng::RngStream;

fn run_example() -> partial_match::Result<()> {
    let n = 3000;
    let points = sample_uniform_points(n, &mut RngStream::new(11, 0).rng());
    let parallel = KdTree::build(&points, Axis::Vertical)?;
    let perp = KdTree::build(&points, Axis::Horizontal)?;

    for s in [0.2, 0.5, 0.8] {
        println!(
            "s = {s}: parallel {}, perpendicular {}",
            parallel.cost_parallel(s)?,
            perp.cost_perp(s)?
        );
        assert!(perp.decomposition_check(s)?);
        assert!(parallel.vertical_decomposition_check(s)?);
    }
    for flavor in [TreeFlavor::Kd(Axis::Vertical), TreeFlavor::Kd(Axis::Horizontal)] {
        println!("{flavor:?}: mean at a uniform query ~ {:.1}", flavor.uniform_mean(n as f64));
    }
    assert!(perp.cost_parallel(0.5).is_err());
    Ok(())
}

fn main() -> partial_match::Result<()> {
    run_example()
}
