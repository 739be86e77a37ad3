// Builds a random quadtree and reads its partial-match cost three ways:
// by search, by counting crossed split lines, and from the exact profile.

use partial_match::geometry::Point2;
use partial_match::quadtree::{sample_uniform_points, QuadTree};
use partial_match::rng::RngStream;

fn run_example() -> partial_match::Result<()> {
    let small = QuadTree::build(&Point2::from_coords(&[(0.5, 0.5), (0.25, 0.75)]))?;
    println!("two points: cost(0.3) = {}, cost(0.6) = {}", small.cost(0.3)?, small.cost(0.6)?);

    let points = sample_uniform_points(2000, &mut RngStream::new(7, 0).rng());
    let tree = QuadTree::build(&points)?;
    println!("root subtree sizes: {:?}", tree.subtree_sizes()?);
    println!("fill-up level: {}", tree.fill_up_level());

    let profile = tree.profile();
    for s in [0.1, 0.25, 0.5, 0.9] {
        let c = tree.cost(s)?;
        assert_eq!(c, tree.horizontal_crossings(s)?);
        assert_eq!(c, profile.eval(s)?);
        println!("cost({s}) = {c}");
    }
    let (sup, (lo, hi)) = tree.supremum();
    println!("{} profile segments, supremum {sup} on [{lo:.5}, {hi:.5})", profile.values().len());
    Ok(())
}

fn main() -> partial_match::Result<()> {
    run_example()
}
