// Prints the derived constants and checks the identities that tie them together.

use partial_match::specfun::{beta_fn, constants, gamma, h};

fn run_example() -> partial_match::Result<()> {
    let c = constants();
    for (name, value) in c.entries() {
        println!("{name:>10} = {value:.12}");
    }

    let b = c.beta;
    println!("beta^2 + 3 beta - 2 = {:.1e}", b * b + 3.0 * b - 2.0);
    println!("Gamma(2.5) = {:.15}", gamma(2.5)?);
    println!("B(beta+1, beta+1) = {:.15}", beta_fn(b + 1.0, b + 1.0)?);
    println!("h(0.5) = 2^-beta = {:.12}", h(0.5)?);

    assert!((c.k4 - c.k1 * c.k1 * c.k3).abs() < 1e-15);
    assert!((c.k4 - 0.447363034).abs() < 1e-6);
    Ok(())
}

fn main() -> partial_match::Result<()> {
    run_example()
}
