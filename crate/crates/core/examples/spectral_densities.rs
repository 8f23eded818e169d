//! Energy densities after a jump: values, quadrature moments and the zero
//! and tail structure.

use invosc::spectra::{density_moments, structure_report, SpectralDensity, SpectralParams};

fn main() -> invosc::Result<()> {
    for n in [0, 4, 8] {
        let params = SpectralParams::new(n, 1.0)?;
        let d = SpectralDensity::new(params)?;
        let r = structure_report(&params)?;
        let zeros: Vec<String> = r.zeros[..r.zero_count]
            .iter()
            .map(|z| format!("{z:.4}"))
            .collect();
        println!(
            "P_{n}: P(0) = {:.6}, zeros at [{}], outer peak at {:.4}, tail slope {:.4}",
            d.value(0.0)?,
            zeros.join(", "),
            r.last_max_location,
            r.tail_slope
        );
    }

    println!("n, rho, norm, mean (expected), second (expected)");
    for rho in [0.5, 1.0, 2.0] {
        let params = SpectralParams::new(8, rho)?;
        let m = density_moments(&params)?;
        let (mean, second) = params.expected_moments();
        println!(
            "8, {rho}, {:.12}, {:.8} ({mean:.8}), {:.8} ({second:.8})",
            m.norm, m.mean, m.second
        );
    }
    Ok(())
}
