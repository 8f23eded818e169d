//! Energy variance for Fock initial states, from the closed forms and from
//! the exact mode.

use invosc::mode::{mode_at, revival_u, FrequencyProfile, TransitionCoefficients};
use invosc::moments::{energy_variance_fock, revival_variance_over_level_sq, FluctuationRegime};

fn main() -> invosc::Result<()> {
    let profile = FrequencyProfile::PowerRevival {
        n: 2.0,
        omega_tau: 100.0,
    };
    let p = profile.power_params().expect("power profile");
    let coeffs = TransitionCoefficients::for_profile(&profile)?;
    let u = revival_u(p.nu)?;
    let t = 1.5;
    for n in 0..3 {
        let closed = energy_variance_fock(
            &FluctuationRegime::AdiabaticRevival {
                u_pair: u,
                omega: p.omega(t),
            },
            n,
        )?;
        let exact =
            energy_variance_fock(&FluctuationRegime::Exact(mode_at(&profile, &coeffs, t)?), n)?;
        println!(
            "N = {n}: sigma/<E>^2 closed {:.6}, exact {:.6}; sigma/(omega(N+1/2))^2 = {:.6}",
            closed.relative_variance(),
            exact.relative_variance(),
            revival_variance_over_level_sq(u, n)
        );
    }

    for n in 0..3 {
        let f = energy_variance_fock(&FluctuationRegime::InvertedJump { rho: 1.0 }, n)?;
        println!(
            "jump rho = 1, N = {n}: <E^2> = {}, sigma = {}",
            f.second.to_f64()?,
            f.variance.to_f64()?
        );
    }
    Ok(())
}
