//! Exact energy ratio E(t)/E(−τ) for a vacuum state against the adiabatic
//! laws, before the crossing, at it, and after a revival.

use invosc::mode::{mode_at, FrequencyProfile, TransitionCoefficients};
use invosc::moments::{
    adiabatic_prediction, energy_ratio_exact, energy_ratio_mode, AdiabaticRegime, InitialState,
};

fn main() -> invosc::Result<()> {
    let vacuum = InitialState::Fock(0);
    for g in [10.0, 50.0, 200.0] {
        let profile = FrequencyProfile::PowerCrossing {
            n: 2.0,
            omega_tau: g,
        };
        let p = profile.power_params().expect("power profile");
        let pre = energy_ratio_exact(p.nu, g, -0.7)?.to_f64()?;
        let law = adiabatic_prediction(AdiabaticRegime::Pre, &p, -0.7, &vacuum)?.to_f64()?;
        let zero = energy_ratio_exact(p.nu, g, 0.0)?.to_f64()?;
        let limit = adiabatic_prediction(AdiabaticRegime::Crossing, &p, 0.0, &vacuum)?.to_f64()?;
        println!("G = {g}: R(-0.7) = {pre:.6} (law {law:.6}); R(0) = {zero:.6} (law {limit:.6})");

        let late = energy_ratio_exact(p.nu, g, 1.0)?;
        println!("  R(1) = {:.6} e^{:.1}", late.mantissa, late.exponent);
    }

    // revival: stiffness comes back positive and E/ω settles at β
    let profile = FrequencyProfile::PowerRevival {
        n: 2.0,
        omega_tau: 100.0,
    };
    let p = profile.power_params().expect("power profile");
    let coeffs = TransitionCoefficients::for_profile(&profile)?;
    for t in [1.0, 1.5, 2.0] {
        let r = energy_ratio_mode(&mode_at(&profile, &coeffs, t)?).to_f64()?;
        let law = adiabatic_prediction(AdiabaticRegime::Revival, &p, t, &vacuum)?.to_f64()?;
        println!(
            "revival t = {t}: R·ω₀/ω = {:.5}, law {:.5}",
            r * 100.0 / p.omega(t),
            law * 100.0 / p.omega(t)
        );
    }
    Ok(())
}
