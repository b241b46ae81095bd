//! Modified Bessel functions and the closed-form disc solution they build.
//!
//! ```text
//! cargo run --release --example bessel_oracles
//! ```

use panharmonic::special::{bessel_i0, bessel_i1, log_bessel_i0, DiscSolution, SERIES_SWITCH};

fn main() -> panharmonic::Result<()> {
    println!("{:>8} {:>24} {:>24} {:>20}", "z", "I0(z)", "I1(z)", "ln I0(z)");
    for z in [0.0, 0.5, 1.0, 5.0, SERIES_SWITCH, 20.0, 50.0, 300.0] {
        println!("{z:>8} {:>24.16e} {:>24.16e} {:>20.14}", bessel_i0(z)?, bessel_i1(z)?, log_bessel_i0(z)?);
    }

    // v = I0(mu |x|) / I0(mu) on the unit disc, evaluated in log space so the
    // centre value stays representable for large mu
    println!("\n{:>6} {:>14} {:>14} {:>14}", "mu", "v(0)", "-ln v(0)/mu", "rim margin");
    for mu in [1.0, 10.0, 50.0, 200.0] {
        let sol = DiscSolution::new(1.0, mu)?;
        let v0 = sol.log_value_at(0.0);
        println!("{mu:>6} {:>14.6e} {:>14.8} {:>14.8}", v0.exp(), -v0 / mu, sol.margin_at(1.0));
    }
    Ok(())
}
