// Adaptive Gauss-Kronrod integration, the numerical backbone of the
// integral operator `K`, on integrands with endpoint singularities.

use partial_match::quadrature::{integrate, integrate_pieces};
use partial_match::specfun::{beta_fn, beta_exponent, h};

fn run_example() -> partial_match::Result<()> {
    let b = beta_exponent();
    let area = integrate(|s| h(s).unwrap_or(0.0), 0.0, 1.0, 1e-13)?;
    let exact = beta_fn(b / 2.0 + 1.0, b / 2.0 + 1.0)?;
    println!("integral of h = {area:.14} (beta function {exact:.14})");
    assert!((area - exact).abs() < 1e-12);

    let kinked = integrate_pieces(|x| (x - 0.3).abs().sqrt(), &[0.0, 0.3, 1.0], 1e-12)?;
    let expected = 2.0 / 3.0 * (0.3f64.powf(1.5) + 0.7f64.powf(1.5));
    println!("integral of sqrt|x - 0.3| = {kinked:.14} (exact {expected:.14})");
    Ok(())
}

fn main() -> partial_match::Result<()> {
    run_example()
}
