//! Modified Bessel functions and adaptive quadrature.

use swipt_sched::quad::{Tolerance, integrate, integrate_to_infinity};
use swipt_sched::special::{bessel_k, one_minus_scaled_bessel_k, scaled_bessel_k};

fn main() -> swipt_sched::Result<()> {
    for x in [1e-3, 0.5, 2.0, 10.0] {
        println!(
            "x = {x:<6} K0 = {:.12e}  K1 = {:.12e}  K5 = {:.12e}",
            bessel_k(0, x)?,
            bessel_k(1, x)?,
            bessel_k(5, x)?
        );
    }

    // 2 a^{nu/2} K_nu(2 sqrt a) / (nu-1)! tends to 1 as a -> 0; the complement
    // is computed without cancellation.
    for a in [1e-12, 1e-6, 1e-2] {
        println!(
            "a = {a:e}: scaled = {:.15}, 1 - scaled = {:.6e}",
            scaled_bessel_k(2, a)?,
            one_minus_scaled_bessel_k(2, a)?
        );
    }

    let gauss = integrate_to_infinity(|x| (-x * x).exp(), 0.0, Tolerance::absolute(1e-13))?;
    println!(
        "int_0^inf exp(-x^2) = {:.15} (sqrt(pi)/2 = {:.15}), {} panels",
        gauss.value,
        std::f64::consts::PI.sqrt() / 2.0,
        gauss.panels
    );
    let log = integrate(|x: f64| x.ln(), 1e-12, 1.0, Tolerance::absolute(1e-12))?;
    println!("int_0^1 ln x ~ {:.12}, error estimate {:.1e}", log.value, log.error);
    Ok(())
}
