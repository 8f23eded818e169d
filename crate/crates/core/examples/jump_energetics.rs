//! Sudden jump from a harmonic to an inverted oscillator: the energy right
//! after the jump, its constancy afterwards, and the growth of ⟨x²⟩.

use invosc::mode::{jump_v, mode_at, FrequencyProfile, TransitionCoefficients};
use invosc::moments::{
    inverted_energy, jump_energy_fock, mean_energy_in, propagate_second, InitialState,
};

fn main() -> invosc::Result<()> {
    for rho in [0.5, 1.0, 2.0] {
        let levels: Vec<String> = (0..4)
            .map(|n| format!("{:+.4}", jump_energy_fock(n, rho)))
            .collect();
        println!("rho = {rho}: E for N = 0..3: {}", levels.join(" "));
    }

    let kappa = 2.0;
    let (vp, vm) = jump_v(kappa)?;
    let profile = FrequencyProfile::ConstantInverted { kappa };
    let coeffs = TransitionCoefficients::with_v(vp, vm);
    let init = InitialState::Fock(0);
    println!(
        "constant kappa = {kappa}, predicted E = {}",
        inverted_energy((vp, vm), &init, kappa, 1.0)?
    );
    println!("t, <x^2>, E");
    for t in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let m = mode_at(&profile, &coeffs, t)?;
        let s = propagate_second(&init, &m)?;
        let e = mean_energy_in(&profile, &coeffs, &init, &m, &s)?.to_f64()?;
        println!("{t}, {:.6e}, {e:+.12}", s.x2_scaled().to_f64()?);
    }
    Ok(())
}
