// Moments of the marginal factor and the contraction `m_{n+1} = K m_n`
// that drives the second moment of the limit-process approximants.

use partial_match::moments::{k_contraction_constant, psi_moments, second_moment_iterates, second_moment_limit};
use partial_match::specfun::constants;

fn run_example() -> partial_match::Result<()> {
    let c = psi_moments(6)?;
    for m in 1..=6 {
        println!("c_{m} = {:.10}", c.get(m));
    }
    assert!((c.get(2) - constants().c2).abs() < 1e-12);

    let grid = 129;
    let limit = second_moment_limit(grid)?;
    let lip = k_contraction_constant();
    println!("Lipschitz constant of K: {lip:.6}");
    let mut previous = f64::INFINITY;
    for n in [0, 2, 4, 8] {
        let m = second_moment_iterates(n, grid)?;
        let gap = m.sup_distance(&limit);
        println!("n = {n:2}: sup |m_n - c2 h^2| = {gap:.6}, m_n(0.5) = {:.6}", m.eval(0.5));
        assert!(gap < previous);
        previous = gap;
    }
    Ok(())
}

fn main() -> partial_match::Result<()> {
    run_example()
}
