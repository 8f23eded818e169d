//! Fractional-order Bessel functions, the complex gamma modulus and the
//! terminating hypergeometric polynomial behind the spectral densities.

use invosc::specfun::{
    bessel_i_scaled, bessel_j, gamma_abs_sq, hyp_terminating, log_gamma_complex,
};
use num_complex::Complex64;

fn main() -> invosc::Result<()> {
    let nu = 0.25;
    println!("z, J_nu, J_-nu, e^-z I_nu, e^-z I_-nu");
    for z in [0.1, 1.0, 10.0, 30.0, 300.0] {
        println!(
            "{z}, {:.15e}, {:.15e}, {:.15e}, {:.15e}",
            bessel_j(nu, z)?,
            bessel_j(-nu, z)?,
            bessel_i_scaled(nu, z)?,
            bessel_i_scaled(-nu, z)?
        );
    }

    // |Γ(1/4 + ix)|² falls off like e^{−π|x|}
    for x in [0.0, 2.0, 10.0] {
        println!("|Gamma(1/4 + {x}i)|^2 = {:.15e}", gamma_abs_sq(0.25, x)?);
    }
    println!(
        "ln Gamma(1/4 - 3i) = {}",
        log_gamma_complex(Complex64::new(0.25, -3.0))?
    );

    let b = Complex64::new(0.25, -2.0);
    println!(
        "F(-4, 1/4 - 2i; 1/2; 2) = {}",
        hyp_terminating(4, b, 0.5, Complex64::new(2.0, 0.0))?
    );
    Ok(())
}
