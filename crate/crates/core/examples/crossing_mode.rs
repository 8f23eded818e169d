//! The classical mode through a zero crossing of γ(t) = ω₀²|t|ⁿ, checked
//! against direct integration.

use invosc::mode::{mode_at, FrequencyProfile, TransitionCoefficients};
use invosc::oracle::{integrate_mode_with, OdeOptions};
use invosc::validation::oracle_deviation;

fn main() -> invosc::Result<()> {
    let profile = FrequencyProfile::PowerCrossing {
        n: 2.0,
        omega_tau: 20.0,
    };
    let coeffs = TransitionCoefficients::for_profile(&profile)?;
    let times: Vec<f64> = (0..=12).map(|i| -1.0 + 0.25 * i as f64).collect();
    let run = integrate_mode_with(
        &profile,
        -1.0,
        2.0,
        &OdeOptions::new(1e-10).with_samples(times),
    )?;

    println!("t, |eps|, log_scale, |W - 2i|, oracle deviation");
    for s in &run.samples {
        let m = mode_at(&profile, &coeffs, s.t)?;
        println!(
            "{:5.2}, {:.6e}, {:.1}, {:.1e}, {:.1e}",
            s.t,
            m.eps.norm(),
            m.log_scale,
            m.wronskian_error(),
            oracle_deviation(&m, s)
        );
    }
    println!(
        "integrator: {} steps, {} rejected",
        run.steps_taken, run.stats.rejected
    );

    // far past the crossing the mode is carried as a mantissa and e^{log_scale}
    let late = mode_at(&profile, &coeffs, 12.0)?;
    println!(
        "t = 12: |eps| = {:.6} e^{:.1}",
        late.eps.norm(),
        late.log_scale
    );
    Ok(())
}
