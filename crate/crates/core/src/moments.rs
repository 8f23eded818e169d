//! Quantum moments driven by a classical mode: energies, energy ratios,
//! squeezing and Fock-state energy fluctuations.
//!
//! Second moments are linear in the initial ones, with kernel entries built
//! from ε and ε̇. Everything inherits the mode's `log_scale`: second-order
//! quantities carry `e^{2·log_scale}`, first-order ones `e^{log_scale}`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::mode::{
    crossing_values, mode_at, ClassicalMode, FrequencyProfile, PowerParams, TransitionCoefficients,
};
use crate::scaled::ScaledReal;
use crate::specfun::{bessel_i_scaled, bessel_j, gamma as gamma_fn};

/// Allowed deviation in |u₊|² − |u₋|² = 1 and Im(v₊v₋*) = 1.
pub const PAIR_NORM_TOL: f64 = 1e-10;

/// Relative tolerance for recognising the special class of initial moments.
const SPECIAL_TOL: f64 = 1e-12;

/// State at t = −τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    /// Number eigenstate of the initial oscillator.
    Fock(u32),
    /// Full (non-central) second moments and the means.
    Gaussian {
        x2: f64,
        p2: f64,
        xp: f64,
        x0: f64,
        p0: f64,
    },
}

impl InitialState {
    /// Finite moments and the uncertainty relation on the central part.
    pub fn validate(&self) -> Result<()> {
        if let InitialState::Gaussian { x2, p2, xp, x0, p0 } = *self {
            if ![x2, p2, xp, x0, p0].iter().all(|v| v.is_finite()) {
                return domain("initial moments must be finite");
            }
            if !(x2 > 0.0 && p2 > 0.0) {
                return domain(format!(
                    "second moments must be positive, got x2 = {x2}, p2 = {p2}"
                ));
            }
            let sx = x2 - x0 * x0;
            let sp = p2 - p0 * p0;
            let sxp = 0.5 * xp - x0 * p0;
            let d = sx * sp - sxp * sxp;
            if d < 0.25 * (1.0 - 1e-12) {
                return domain(format!(
                    "uncertainty relation violated: σxσp − σxp² = {d} < 1/4"
                ));
            }
        }
        Ok(())
    }

    /// Moments at t = −τ for an oscillator of frequency `omega0`.
    pub fn moments(&self, omega0: f64) -> QuadraticState {
        match *self {
            InitialState::Fock(n) => {
                let level = n as f64 + 0.5;
                QuadraticState {
                    t: -1.0,
                    x2: level / omega0,
                    p2: level * omega0,
                    xp: 0.0,
                    x1: 0.0,
                    p1: 0.0,
                    log_scale: 0.0,
                }
            }
            InitialState::Gaussian { x2, p2, xp, x0, p0 } => QuadraticState {
                t: -1.0,
                x2,
                p2,
                xp,
                x1: x0,
                p1: p0,
                log_scale: 0.0,
            },
        }
    }

    /// ⟨p²⟩ = ω₀²⟨x²⟩ and ⟨xp+px⟩ = 0: vacuum, thermal and Fock states.
    pub fn is_special(&self, omega0: f64) -> bool {
        match *self {
            InitialState::Fock(_) => true,
            InitialState::Gaussian { x2, p2, xp, .. } => {
                let scale = p2 + omega0 * omega0 * x2;
                (p2 - omega0 * omega0 * x2).abs() <= SPECIAL_TOL * scale
                    && (omega0 * xp).abs() <= SPECIAL_TOL * scale
            }
        }
    }

    pub fn fock_index(&self) -> Option<u32> {
        match *self {
            InitialState::Fock(n) => Some(n),
            _ => None,
        }
    }

    /// Energy at t = −τ, (⟨p²⟩ + ω₀²⟨x²⟩)/2.
    pub fn initial_energy(&self, omega0: f64) -> f64 {
        let m = self.moments(omega0);
        0.5 * (m.p2 + omega0 * omega0 * m.x2)
    }
}

/// Moments at time `t`. Stored values are mantissas; see the module notes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticState {
    pub t: f64,
    pub x2: f64,
    pub p2: f64,
    /// ⟨xp + px⟩.
    pub xp: f64,
    pub x1: f64,
    pub p1: f64,
    pub log_scale: f64,
}

impl QuadraticState {
    /// Universal invariant ⟨x²⟩⟨p²⟩ − ⟨xp+px⟩²/4.
    pub fn invariant_d(&self) -> ScaledReal {
        ScaledReal::new(
            self.x2 * self.p2 - 0.25 * self.xp * self.xp,
            4.0 * self.log_scale,
        )
    }

    /// Central moments (σx, σp, σxp) with σxp = ⟨xp+px⟩/2 − ⟨x⟩⟨p⟩.
    pub fn central(&self) -> (f64, f64, f64) {
        (
            self.x2 - self.x1 * self.x1,
            self.p2 - self.p1 * self.p1,
            0.5 * self.xp - self.x1 * self.p1,
        )
    }

    pub fn x2_scaled(&self) -> ScaledReal {
        ScaledReal::new(self.x2, 2.0 * self.log_scale)
    }

    pub fn p2_scaled(&self) -> ScaledReal {
        ScaledReal::new(self.p2, 2.0 * self.log_scale)
    }

    pub fn xp_scaled(&self) -> ScaledReal {
        ScaledReal::new(self.xp, 2.0 * self.log_scale)
    }
}

/// (a, b, c, d) with x = a x₀ + b p₀ and p = c x₀ + d p₀.
fn kernel(mode: &ClassicalMode) -> [f64; 4] {
    let r = mode.omega0.sqrt();
    [
        r * mode.eps.re,
        mode.eps.im / r,
        r * mode.eps_dot.re,
        mode.eps_dot.im / r,
    ]
}

fn apply_kernel(k: [f64; 4], x2: f64, p2: f64, s: f64) -> (f64, f64, f64) {
    let [a, b, c, d] = k;
    (
        a * a * x2 + b * b * p2 + a * b * s,
        c * c * x2 + d * d * p2 + c * d * s,
        2.0 * a * c * x2 + 2.0 * b * d * p2 + (a * d + b * c) * s,
    )
}

/// Mean coordinate and momentum at the mode's time, given their values at −τ.
/// Results are mantissas relative to `e^{mode.log_scale}`.
pub fn propagate_first(x0: f64, p0: f64, mode: &ClassicalMode) -> (f64, f64) {
    let [a, b, c, d] = kernel(mode);
    (a * x0 + b * p0, c * x0 + d * p0)
}

/// Second moments at the mode's time. Special initial states use the
/// |ε|², |ε̇|², Re(ε̇ε*) forms.
pub fn propagate_second(init: &InitialState, mode: &ClassicalMode) -> Result<QuadraticState> {
    init.validate()?;
    if !init.is_special(mode.omega0) {
        return propagate_second_general(init, mode);
    }
    let m0 = init.moments(mode.omega0);
    let w = mode.omega0;
    let (x1, p1) = propagate_first(m0.x1, m0.p1, mode);
    Ok(QuadraticState {
        t: mode.t,
        x2: w * m0.x2 * mode.eps.norm_sqr(),
        p2: m0.p2 * mode.eps_dot.norm_sqr() / w,
        xp: 2.0 * m0.x2 * w * (mode.eps_dot * mode.eps.conj()).re,
        x1,
        p1,
        log_scale: mode.log_scale,
    })
}

/// Second moments from the three bilinear forms, for any initial state.
pub fn propagate_second_general(
    init: &InitialState,
    mode: &ClassicalMode,
) -> Result<QuadraticState> {
    init.validate()?;
    let m0 = init.moments(mode.omega0);
    let (x2, p2, xp) = apply_kernel(kernel(mode), m0.x2, m0.p2, m0.xp);
    let (x1, p1) = propagate_first(m0.x1, m0.p1, mode);
    Ok(QuadraticState {
        t: mode.t,
        x2,
        p2,
        xp,
        x1,
        p1,
        log_scale: mode.log_scale,
    })
}

/// Same result assembled from separately propagated central moments and means.
pub fn propagate_split(init: &InitialState, mode: &ClassicalMode) -> Result<QuadraticState> {
    init.validate()?;
    let m0 = init.moments(mode.omega0);
    let (sx, sp, sxp) = m0.central();
    let (cx, cp, cxp) = apply_kernel(kernel(mode), sx, sp, 2.0 * sxp);
    let (x1, p1) = propagate_first(m0.x1, m0.p1, mode);
    Ok(QuadraticState {
        t: mode.t,
        x2: cx + x1 * x1,
        p2: cp + p1 * p1,
        xp: cxp + 2.0 * x1 * p1,
        x1,
        p1,
        log_scale: mode.log_scale,
    })
}

/// (⟨p²⟩ + γ⟨x²⟩)/2.
pub fn mean_energy(state: &QuadraticState, gamma: f64) -> ScaledReal {
    ScaledReal::new(0.5 * (state.p2 + gamma * state.x2), 2.0 * state.log_scale)
}

/// ⟨E⟩ of `state`, the moments of `init` at the instant of `mode`.
///
/// In the exponential stages (after a jump, or a constant inverted
/// profile) the energy is read from the v weights instead: ⟨p²⟩ and κ²⟨x²⟩
/// grow like e^{2κt} and their difference is lost to rounding.
pub fn mean_energy_in(
    profile: &FrequencyProfile,
    coeffs: &TransitionCoefficients,
    init: &InitialState,
    mode: &ClassicalMode,
    state: &QuadraticState,
) -> Result<ScaledReal> {
    let rate = match *profile {
        FrequencyProfile::SuddenJump { rho } if mode.t >= 0.0 => Some(rho),
        FrequencyProfile::ConstantInverted { kappa } => Some(kappa),
        _ => None,
    };
    match (rate, coeffs.v_pair) {
        (Some(kappa), Some(v)) => Ok(ScaledReal::plain(inverted_energy(v, init, kappa, 1.0)?)),
        _ => Ok(mean_energy(state, mode.gamma)),
    }
}

/// Energy ratio E(t)/E(−τ) for special initial states, read off the mode.
pub fn energy_ratio_mode(mode: &ClassicalMode) -> ScaledReal {
    let (m, e) = mode.energy_form();
    ScaledReal::new(m / (2.0 * mode.omega0), e)
}

/// (K₊, K₋, K₀) built from ordinary Bessel functions.
fn k_functions(nu: f64, z: f64) -> Result<(f64, f64, f64)> {
    let jn1 = bessel_j(nu - 1.0, z)?;
    let jn = bessel_j(nu, z)?;
    let j1n = bessel_j(1.0 - nu, z)?;
    let jmn = bessel_j(-nu, z)?;
    Ok((
        jn1 * jn1 + jn * jn,
        j1n * j1n + jmn * jmn,
        jn1 * j1n - jn * jmn,
    ))
}

/// Modified-Bessel counterparts of [`k_functions`], each times e^{−2z}.
fn k_functions_modified_scaled(nu: f64, z: f64) -> Result<(f64, f64, f64)> {
    let in1 = bessel_i_scaled(nu - 1.0, z)?;
    let i_n = bessel_i_scaled(nu, z)?;
    let i1n = bessel_i_scaled(1.0 - nu, z)?;
    let imn = bessel_i_scaled(-nu, z)?;
    Ok((
        in1 * in1 - i_n * i_n,
        i1n * i1n - imn * imn,
        in1 * i1n - i_n * imn,
    ))
}

/// Exact E(t)/E(−τ) across an inverting power-law crossing, for special
/// initial states. Returned with exponent 2y(t) once t > 0.
pub fn energy_ratio_exact(nu: f64, omega_tau: f64, t: f64) -> Result<ScaledReal> {
    if !(nu > 0.0 && nu < 0.5) {
        return domain(format!("order must lie in (0, 1/2), got {nu}"));
    }
    if !(t >= -1.0) || !t.is_finite() {
        return domain(format!("time must be finite and ≥ −1, got {t}"));
    }
    let p = PowerParams::new(1.0 / nu - 2.0, omega_tau)?;
    if t.abs() < p.crossing_window() {
        // limiting forms; γ|ε|² is negligible but kept for continuity
        let coeffs = TransitionCoefficients::for_profile(&FrequencyProfile::PowerCrossing {
            n: p.n,
            omega_tau,
        })?;
        let (e0, d0) = crossing_values(&p, &coeffs)?;
        let gam = -t.signum() * omega_tau * omega_tau * t.abs().powf(p.n);
        let e = e0 + d0 * t;
        return Ok(ScaledReal::plain(
            (gam * e.norm_sqr() + d0.norm_sqr()) / (2.0 * omega_tau),
        ));
    }
    let y = p.y(t);
    let pre = 0.125 * (p.g * PI / (nu * PI).sin()).powi(2) * t.abs().powf(p.n + 1.0);
    let (kp_g, km_g, k0_g) = k_functions(nu, p.g)?;
    if t < 0.0 {
        let (kp, km, k0) = k_functions(nu, y)?;
        Ok(ScaledReal::plain(
            pre * (km_g * kp + kp_g * km - 2.0 * k0_g * k0),
        ))
    } else {
        let (kp, km, k0) = k_functions_modified_scaled(nu, y)?;
        Ok(ScaledReal::new(
            pre * (km_g * kp + kp_g * km - 2.0 * k0_g * k0),
            2.0 * y,
        ))
    }
}

/// Regimes with a closed-form adiabatic energy law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdiabaticRegime {
    /// Before the crossing: E/ω conserved.
    Pre,
    /// Value at the crossing instant for g ≫ 1.
    Crossing,
    /// After the stiffness revives to positive values.
    Revival,
    /// Exponential growth after inversion, y ≫ 1.
    InvertedAsymptotic,
}

/// β = |u₊|² + |u₋|².
pub fn beta(u_pair: (Complex64, Complex64)) -> f64 {
    u_pair.0.norm_sqr() + u_pair.1.norm_sqr()
}

/// Initial-state correction Δβ to the revival law, with the products u₊u₋
/// taken without conjugation.
pub fn delta_beta(u_pair: (Complex64, Complex64), init: &InitialState, omega0: f64) -> Result<f64> {
    init.validate()?;
    let m0 = init.moments(omega0);
    let prod = u_pair.0 * u_pair.1;
    let e0 = init.initial_energy(omega0);
    Ok(((omega0 * omega0 * m0.x2 - m0.p2) * prod.re + omega0 * m0.xp * prod.im) / e0)
}

/// Late-time weights of the exact revival mode in the form
/// ω^{-1/2}(u₊e^{iφ} + u₋e^{−iφ}).
///
/// The closed-form pair is defined up to the phase g accumulated before
/// the crossing; that common phase is invisible to β and to the squeezing
/// range but not to Δβ.
pub fn revival_weights(p: &PowerParams) -> Result<(Complex64, Complex64)> {
    let (up, um) = crate::mode::revival_u(p.nu)?;
    let phase = Complex64::from_polar(1.0, p.g);
    Ok((up * phase, um * phase))
}

/// Adiabatic prediction for E(t)/E(−τ) in the given regime.
pub fn adiabatic_prediction(
    regime: AdiabaticRegime,
    p: &PowerParams,
    t: f64,
    init: &InitialState,
) -> Result<ScaledReal> {
    let nu = p.nu;
    match regime {
        AdiabaticRegime::Pre => {
            if !(-1.0..0.0).contains(&t) {
                return domain(format!("pre-crossing law needs −1 ≤ t < 0, got {t}"));
            }
            Ok(ScaledReal::plain(p.omega(t) / p.omega_tau))
        }
        AdiabaticRegime::Crossing => {
            let d = 2f64.powf(nu) * gamma_fn(nu)? * (PI * nu).sin();
            Ok(ScaledReal::plain(PI * p.g.powf(2.0 * nu - 1.0) / (d * d)))
        }
        AdiabaticRegime::Revival => {
            if !(t > 0.0) {
                return domain(format!("revival law needs t > 0, got {t}"));
            }
            let u = revival_weights(p)?;
            let db = delta_beta(u, init, p.omega_tau)?;
            Ok(ScaledReal::plain(p.omega(t) / p.omega_tau * (beta(u) + db)))
        }
        AdiabaticRegime::InvertedAsymptotic => {
            if !(t > 0.0) {
                return domain(format!("inverted asymptotic law needs t > 0, got {t}"));
            }
            let c = (0.5 * nu * PI).cos();
            let mantissa = (2.0 * nu - 1.0) / (8.0 * p.g * t * c * c);
            Ok(ScaledReal::new(mantissa, 2.0 * p.y(t)))
        }
    }
}

fn check_v_pair(v_pair: (Complex64, Complex64)) -> Result<()> {
    let im = (v_pair.0 * v_pair.1.conj()).im;
    if (im - 1.0).abs() > PAIR_NORM_TOL {
        return Err(Error::Precondition(format!("Im(v₊v₋*) = {im}, expected 1")));
    }
    Ok(())
}

fn check_u_pair(u_pair: (Complex64, Complex64)) -> Result<()> {
    let d = u_pair.0.norm_sqr() - u_pair.1.norm_sqr();
    if (d - 1.0).abs() > PAIR_NORM_TOL {
        return Err(Error::Precondition(format!(
            "|u₊|² − |u₋|² = {d}, expected 1"
        )));
    }
    Ok(())
}

/// Time-independent energy in a constant inverted stage γ = −κ², expressed
/// through the moments at −τ.
pub fn inverted_energy(
    v_pair: (Complex64, Complex64),
    init: &InitialState,
    kappa: f64,
    omega0: f64,
) -> Result<f64> {
    check_v_pair(v_pair)?;
    init.validate()?;
    let m0 = init.moments(omega0);
    let (vp, vm) = v_pair;
    Ok(-kappa
        * (m0.x2 * omega0 * vp.re * vm.re
            + m0.p2 / omega0 * vp.im * vm.im
            + 0.5 * m0.xp * (vp * vm).im))
}

/// Energy right after γ jumps from 1 to −ρ²: the state is unchanged, only
/// the Hamiltonian is. `init` holds the moments just before the jump; for
/// special states these coincide with the moments at −τ.
pub fn jump_energy(init: &InitialState, rho: f64) -> Result<f64> {
    init.validate()?;
    let m0 = init.moments(1.0);
    Ok(0.5 * (m0.p2 - rho * rho * m0.x2))
}

/// Fock-state value of [`jump_energy`]: (2N+1)(1 − ρ²)/4.
pub fn jump_energy_fock(n: u32, rho: f64) -> f64 {
    0.25 * (2.0 * n as f64 + 1.0) * (1.0 - rho * rho)
}

/// s_t/s_{−τ} at adiabatic phase `phi`.
pub fn squeeze_ratio(u_pair: (Complex64, Complex64), phi: f64) -> Result<f64> {
    check_u_pair(u_pair)?;
    let cross = u_pair.0 * u_pair.1.conj() * Complex64::from_polar(1.0, 2.0 * phi);
    Ok(beta(u_pair) + 2.0 * cross.re)
}

/// Range of [`squeeze_ratio`] over all phases.
pub fn squeeze_bounds(u_pair: (Complex64, Complex64)) -> Result<(f64, f64)> {
    check_u_pair(u_pair)?;
    let s = u_pair.0.norm() + u_pair.1.norm();
    Ok((1.0 / (s * s), s * s))
}

/// The A, B, C combinations entering the Fock-state energy variance.
/// Actual values are these times `e^{2·log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub log_scale: f64,
}

/// Where the A, B, C coefficients come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluctuationRegime {
    /// Oscillatory late-time form with weights u± at frequency ω.
    AdiabaticRevival {
        u_pair: (Complex64, Complex64),
        omega: f64,
    },
    /// Constant inverted stage with weights v±.
    InvertedConstant {
        v_pair: (Complex64, Complex64),
        kappa: f64,
    },
    /// Sudden jump from ω₀ = 1 to −ρ².
    InvertedJump { rho: f64 },
    /// Directly from a mode value.
    Exact(ClassicalMode),
}

impl FluctuationRegime {
    pub fn coefficients(&self) -> Result<FluctuationCoefficients> {
        let plain = |a, b, c| FluctuationCoefficients {
            a,
            b,
            c,
            log_scale: 0.0,
        };
        match *self {
            FluctuationRegime::AdiabaticRevival { u_pair, omega } => {
                check_u_pair(u_pair)?;
                let prod = 4.0 * omega * u_pair.0 * u_pair.1;
                Ok(plain(2.0 * omega * beta(u_pair), prod.re, prod.im))
            }
            FluctuationRegime::InvertedConstant { v_pair, kappa } => {
                check_v_pair(v_pair)?;
                let (vp, vm) = v_pair;
                let prod = -2.0 * kappa * vp * vm;
                Ok(plain(-2.0 * kappa * (vp * vm.conj()).re, prod.re, prod.im))
            }
            FluctuationRegime::InvertedJump { rho } => {
                if !(rho > 0.0) || !rho.is_finite() {
                    return domain(format!("rho must be positive, got {rho}"));
                }
                Ok(plain(1.0 - rho * rho, -(1.0 + rho * rho), 0.0))
            }
            FluctuationRegime::Exact(m) => {
                let q = m.gamma * m.eps * m.eps + m.eps_dot * m.eps_dot;
                Ok(FluctuationCoefficients {
                    a: m.gamma * m.eps.norm_sqr() + m.eps_dot.norm_sqr(),
                    b: q.re,
                    c: q.im,
                    log_scale: m.log_scale,
                })
            }
        }
    }
}

/// ⟨x⁴⟩, ⟨x²p²+p²x²⟩, ⟨(xp+px)²⟩ of the Fock state N in ω₀ = 1 units.
pub fn fock_fourth_moments(n: u32) -> (f64, f64, f64) {
    let m = (n as f64) * (n as f64 + 1.0);
    (
        0.75 * (2.0 * m + 1.0),
        0.5 * (2.0 * m - 1.0),
        2.0 * (m + 1.0),
    )
}

/// Mean, second moment and variance of the energy for a Fock initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockFluctuations {
    pub mean: ScaledReal,
    pub second: ScaledReal,
    pub variance: ScaledReal,
}

impl FockFluctuations {
    /// σ_E/⟨E⟩²; infinite when the mean vanishes.
    pub fn relative_variance(&self) -> f64 {
        let m = self.mean.mantissa;
        self.variance.mantissa / (m * m) * (self.variance.exponent - 2.0 * self.mean.exponent).exp()
    }
}

/// ⟨E⟩, ⟨E²⟩ and σ_E = ⟨E²⟩ − ⟨E⟩² for the Fock state N.
pub fn energy_variance_fock(regime: &FluctuationRegime, n: u32) -> Result<FockFluctuations> {
    let k = regime.coefficients()?;
    let (x4, x2p2, xpxp) = fock_fourth_moments(n);
    let e = 4.0 * k.log_scale;
    let second =
        (2.0 * x4 * (k.a * k.a + k.b * k.b) + x2p2 * (k.a * k.a - k.b * k.b) + xpxp * k.c * k.c)
            / 16.0;
    let m = (n as f64) * (n as f64 + 1.0);
    // the A² terms cancel exactly against ⟨E⟩²
    let variance = (m + 1.0) * (k.b * k.b + k.c * k.c) / 8.0;
    Ok(FockFluctuations {
        mean: ScaledReal::new((2.0 * n as f64 + 1.0) * k.a / 4.0, 2.0 * k.log_scale),
        second: ScaledReal::new(second, e),
        variance: ScaledReal::new(variance, e),
    })
}

/// 2|u₊u₋|²(N²+N+1)/(N²+N+1/4), which is σ_E/(ω(N+½))² in the revival
/// regime. It equals σ_E/⟨E⟩² only when β = 1.
pub fn revival_variance_over_level_sq(u_pair: (Complex64, Complex64), n: u32) -> f64 {
    let m = (n as f64) * (n as f64 + 1.0);
    2.0 * (u_pair.0 * u_pair.1).norm_sqr() * (m + 1.0) / (m + 0.25)
}

/// Which formula produced an [`EnergyReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeTag {
    Exact,
    AdiabaticPre,
    AdiabaticRevival,
    AdiabaticInverted,
    Jump,
}

/// Energy summary at one instant. The ratio is E(t)/E(−τ); the variance is
/// only available for Fock initial states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub mean_energy: ScaledReal,
    pub ratio: ScaledReal,
    pub variance: Option<ScaledReal>,
    pub regime: RegimeTag,
}

/// Energy report from the exact mode of `profile`.
pub fn energy_report(
    profile: &FrequencyProfile,
    coeffs: &TransitionCoefficients,
    init: &InitialState,
    t: f64,
) -> Result<EnergyReport> {
    let mode = mode_at(profile, coeffs, t)?;
    let state = propagate_second(init, &mode)?;
    let mean = mean_energy_in(profile, coeffs, init, &mode, &state)?;
    let e0 = init.initial_energy(mode.omega0);
    let variance = match init.fock_index() {
        Some(n) => Some(energy_variance_fock(&FluctuationRegime::Exact(mode), n)?.variance),
        None => None,
    };
    let regime = match profile {
        FrequencyProfile::SuddenJump { .. } if t >= 0.0 => RegimeTag::Jump,
        _ => RegimeTag::Exact,
    };
    Ok(EnergyReport {
        mean_energy: mean,
        ratio: mean.scale(1.0 / e0),
        variance,
        regime,
    })
}

/// Energy report from the adiabatic laws of a power profile.
pub fn adiabatic_report(
    profile: &FrequencyProfile,
    init: &InitialState,
    t: f64,
) -> Result<EnergyReport> {
    let p = profile
        .power_params()
        .ok_or_else(|| Error::Precondition("adiabatic laws need a power profile".into()))?;
    let (regime, tag) = match (profile, t < 0.0) {
        (_, true) => (AdiabaticRegime::Pre, RegimeTag::AdiabaticPre),
        (FrequencyProfile::PowerRevival { .. }, false) => {
            (AdiabaticRegime::Revival, RegimeTag::AdiabaticRevival)
        }
        _ => (
            AdiabaticRegime::InvertedAsymptotic,
            RegimeTag::AdiabaticInverted,
        ),
    };
    let ratio = adiabatic_prediction(regime, &p, t, init)?;
    let e0 = init.initial_energy(p.omega_tau);
    let variance = match (init.fock_index(), regime) {
        // no crossing yet: the Fock state is still an eigenstate
        (Some(_), AdiabaticRegime::Pre) => Some(ScaledReal::plain(0.0)),
        (Some(n), AdiabaticRegime::Revival) => {
            let u_pair = crate::mode::revival_u(p.nu)?;
            let r = FluctuationRegime::AdiabaticRevival {
                u_pair,
                omega: p.omega(t),
            };
            Some(energy_variance_fock(&r, n)?.variance)
        }
        _ => None,
    };
    Ok(EnergyReport {
        mean_energy: ratio.scale(e0),
        ratio,
        variance,
        regime: tag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::{jump_v, revival_u};

    fn mode(profile: FrequencyProfile, t: f64) -> ClassicalMode {
        let c = TransitionCoefficients::for_profile(&profile).unwrap();
        mode_at(&profile, &c, t).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn first_moments_rotate() {
        let w = 3.0;
        let prof = FrequencyProfile::ConstantHarmonic { omega0: w };
        let m = mode(prof, -1.0 + PI / w);
        let (x, p) = propagate_first(1.0, 0.0, &m);
        assert!((x + 1.0).abs() < 1e-14 && p.abs() < 1e-13);
        assert_eq!(propagate_first(0.0, 0.0, &m), (0.0, 0.0));
    }

    #[test]
    fn vacuum_at_initial_time() {
        let prof = FrequencyProfile::PowerCrossing {
            n: 2.0,
            omega_tau: 50.0,
        };
        let s = propagate_second(&InitialState::Fock(0), &mode(prof, -1.0)).unwrap();
        assert!(close(s.x2, 1.0 / 100.0, 1e-13));
        assert!(close(s.p2, 25.0, 1e-13));
        assert!(s.xp.abs() < 1e-13);
        for n in 0..4 {
            let s = propagate_second(&InitialState::Fock(n), &mode(prof, -1.0)).unwrap();
            let e = mean_energy(&s, 2500.0).to_f64().unwrap();
            assert!(close(e, 50.0 * (n as f64 + 0.5), 1e-13));
        }
    }

    #[test]
    fn general_and_special_forms_agree() {
        let prof = FrequencyProfile::PowerCrossing {
            n: 2.0,
            omega_tau: 20.0,
        };
        let init = InitialState::Fock(2);
        for i in 0..20 {
            let t = -1.0 + 0.1 * i as f64 + 0.013;
            let m = mode(prof, t);
            let a = propagate_second(&init, &m).unwrap();
            let b = propagate_second_general(&init, &m).unwrap();
            let scale = a.x2.abs() + a.p2.abs() / 400.0;
            assert!(
                (a.x2 - b.x2).abs() <= 1e-12 * scale.max(a.x2.abs()),
                "t {t}"
            );
            assert!((a.p2 - b.p2).abs() <= 1e-12 * a.p2.abs().max(400.0 * scale));
            assert!((a.xp - b.xp).abs() <= 1e-12 * (a.x2 * a.p2).sqrt() * 2.0);
        }
    }

    #[test]
    fn split_propagation_matches_full() {
        let prof = FrequencyProfile::PowerCrossing {
            n: 1.0,
            omega_tau: 10.0,
        };
        let init = InitialState::Gaussian {
            x2: 0.6,
            p2: 4.0,
            xp: 0.4,
            x0: 0.5,
            p0: -1.0,
        };
        for t in [-0.7, 0.2, 0.9] {
            let m = mode(prof, t);
            let a = propagate_second(&init, &m).unwrap();
            let b = propagate_split(&init, &m).unwrap();
            for (u, v) in [(a.x2, b.x2), (a.p2, b.p2), (a.xp, b.xp)] {
                assert!((u - v).abs() <= 1e-12 * (a.x2 + a.p2));
            }
        }
    }

    #[test]
    fn invariant_survives_crossing() {
        let prof = FrequencyProfile::PowerCrossing {
            n: 2.0,
            omega_tau: 20.0,
        };
        let init = InitialState::Fock(3);
        let d0 = propagate_second(&init, &mode(prof, -1.0))
            .unwrap()
            .invariant_d()
            .to_f64()
            .unwrap();
        let d1 = propagate_second(&init, &mode(prof, 0.4))
            .unwrap()
            .invariant_d()
            .to_f64()
            .unwrap();
        assert!((d0 - 12.25).abs() < 1e-12);
        assert!(close(d1, d0, 1e-9), "{d1} vs {d0}");
    }

    #[test]
    fn rejects_uncertainty_violation() {
        let bad = InitialState::Gaussian {
            x2: 0.1,
            p2: 0.1,
            xp: 0.0,
            x0: 0.0,
            p0: 0.0,
        };
        assert!(bad.validate().is_err());
        let with_mean = InitialState::Gaussian {
            x2: 1.1,
            p2: 0.5,
            xp: 0.0,
            x0: 1.0,
            p0: 0.0,
        };
        // full moments look fine, central ones do not
        assert!(with_mean.validate().is_err());
    }

    #[test]
    fn jump_energetics() {
        for rho in [0.5, 1.0, 2.0] {
            let prof = FrequencyProfile::SuddenJump { rho };
            for n in 0..4 {
                let init = InitialState::Fock(n);
                let m = mode(prof, 0.0);
                let s = propagate_second(&init, &m).unwrap();
                let e = mean_energy(&s, m.gamma).to_f64().unwrap();
                assert!((e - jump_energy_fock(n, rho)).abs() < 1e-12);
                assert!(
                    (jump_energy(&init, rho).unwrap() - jump_energy_fock(n, rho)).abs() < 1e-12
                );
            }
        }
        // a non-stationary state rotates before the jump; use its moments at 0⁻
        let g = InitialState::Gaussian {
            x2: 0.8,
            p2: 0.9,
            xp: 0.3,
            x0: 0.2,
            p0: 0.1,
        };
        let prof = FrequencyProfile::SuddenJump { rho: 1.5 };
        let b = propagate_second(&g, &mode(prof, -1e-15)).unwrap();
        let before = InitialState::Gaussian {
            x2: b.x2,
            p2: b.p2,
            xp: b.xp,
            x0: b.x1,
            p0: b.p1,
        };
        let m = mode(prof, 0.0);
        let s = propagate_second(&g, &m).unwrap();
        let e = mean_energy(&s, m.gamma).to_f64().unwrap();
        assert!((e - jump_energy(&before, 1.5).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn inverted_energy_examples() {
        let f0 = InitialState::Fock(0);
        assert!(
            inverted_energy(jump_v(1.0).unwrap(), &f0, 1.0, 1.0)
                .unwrap()
                .abs()
                < 1e-15
        );
        let e = inverted_energy(jump_v(2.0).unwrap(), &f0, 2.0, 1.0).unwrap();
        assert!((e + 0.75).abs() < 1e-14);
        let bad = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!(matches!(
            inverted_energy(bad, &f0, 1.0, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn inverted_energy_is_time_independent() {
        let prof = FrequencyProfile::ConstantInverted { kappa: 2.0 };
        let v = jump_v(2.0).unwrap();
        let c = TransitionCoefficients::with_v(v.0, v.1);
        let init = InitialState::Fock(0);
        let want = inverted_energy(v, &init, 2.0, 1.0).unwrap();
        let mut x2_prev = 0.0;
        for t in [0.5, 1.5] {
            let m = mode_at(&prof, &c, t).unwrap();
            let s = propagate_second(&init, &m).unwrap();
            assert!(s.x2 > x2_prev);
            x2_prev = s.x2;
            let e = mean_energy(&s, m.gamma).to_f64().unwrap();
            assert!((e - want).abs() < 1e-10, "t {t}: {e} vs {want}");
        }
    }

    #[test]
    fn ratio_at_start_and_crossing() {
        for nu in [0.2, 0.25, 1.0 / 3.0] {
            let r = energy_ratio_exact(nu, 50.0, -1.0)
                .unwrap()
                .to_f64()
                .unwrap();
            assert!((r - 1.0).abs() < 1e-10, "nu {nu}: {r}");
        }
        let p = PowerParams::new(2.0, 50.0).unwrap();
        let f0 = InitialState::Fock(0);
        let law = adiabatic_prediction(AdiabaticRegime::Crossing, &p, 0.0, &f0)
            .unwrap()
            .mantissa;
        assert!((law - 0.067593).abs() < 1e-5);
        let exact = energy_ratio_exact(0.25, 50.0, 0.0).unwrap().mantissa;
        assert!((exact / law - 1.0).abs() < 0.02, "{exact} vs {law}");
    }

    #[test]
    fn ratio_matches_mode_energy() {
        for (n, g) in [(2.0, 50.0), (1.0, 10.0), (4.0, 5.0)] {
            let prof = FrequencyProfile::PowerCrossing { n, omega_tau: g };
            let nu = 1.0 / (n + 2.0);
            for t in [-0.6, -0.1, -1e-7, 1e-7, 0.3, 0.8] {
                let a = energy_ratio_exact(nu, g, t).unwrap();
                let b = energy_ratio_mode(&mode(prof, t));
                let d = (a.ln_abs() - b.ln_abs()).abs();
                assert!(
                    a.signum() == b.signum() && d < 1e-8,
                    "n {n} G {g} t {t}: {a:?} vs {b:?}"
                );
            }
        }
    }

    #[test]
    fn revival_laws() {
        let f0 = InitialState::Fock(0);
        for (n, want) in [(2.0, 3.0), (1.0, 5.0 / 3.0)] {
            let p = PowerParams::new(n, 100.0).unwrap();
            let r = adiabatic_prediction(AdiabaticRegime::Revival, &p, 1.5, &f0)
                .unwrap()
                .mantissa;
            assert!((r / p.omega(1.5) * 100.0 - want).abs() < 1e-12);
        }
        let u = revival_u(0.25).unwrap();
        assert!((beta(u) - 3.0).abs() < 1e-14);
        for init in [
            InitialState::Fock(0),
            InitialState::Fock(5),
            InitialState::Gaussian {
                x2: 0.02,
                p2: 200.0,
                xp: 0.0,
                x0: 0.1,
                p0: 0.0,
            },
        ] {
            assert!(delta_beta(u, &init, 100.0).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn revival_law_for_general_state() {
        // Δβ ≠ 0 here; the prediction must track the exact energy at large G
        let init = InitialState::Gaussian {
            x2: 0.02,
            p2: 60.0,
            xp: 0.5,
            x0: 0.0,
            p0: 0.0,
        };
        for n in [1.0, 2.0] {
            let prof = FrequencyProfile::PowerRevival {
                n,
                omega_tau: 100.0,
            };
            let p = prof.power_params().unwrap();
            let e0 = init.initial_energy(100.0);
            for t in [1.0, 1.37, 2.0] {
                let m = mode(prof, t);
                let exact =
                    mean_energy(&propagate_second(&init, &m).unwrap(), m.gamma).mantissa / e0;
                let pred = adiabatic_prediction(AdiabaticRegime::Revival, &p, t, &init)
                    .unwrap()
                    .mantissa;
                assert!(
                    (exact / pred - 1.0).abs() < 0.02,
                    "n {n} t {t}: {exact} vs {pred}"
                );
            }
        }
    }

    #[test]
    fn inverted_asymptotic_is_negative() {
        let f0 = InitialState::Fock(0);
        for n in [0.5, 1.0, 2.0, 6.0] {
            let p = PowerParams::new(n, 30.0).unwrap();
            let r =
                adiabatic_prediction(AdiabaticRegime::InvertedAsymptotic, &p, 0.7, &f0).unwrap();
            assert!(r.signum() < 0.0);
            assert!((r.exponent - 2.0 * p.y(0.7)).abs() < 1e-12);
        }
        let p = PowerParams::new(2.0, 30.0).unwrap();
        assert!(adiabatic_prediction(AdiabaticRegime::InvertedAsymptotic, &p, -0.5, &f0).is_err());
        assert!(adiabatic_prediction(AdiabaticRegime::Pre, &p, 0.5, &f0).is_err());
    }

    #[test]
    fn squeezing() {
        let u = revival_u(0.25).unwrap();
        let (lo, hi) = squeeze_bounds(u).unwrap();
        let t2 = (PI / 8.0).tan().powi(2);
        assert!((lo - t2).abs() < 1e-12 && (hi - 1.0 / t2).abs() < 1e-12);
        assert!((lo - 0.171_572_875_253_809_9).abs() < 1e-12);
        let (mut mn, mut mx) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..2000 {
            let s = squeeze_ratio(u, PI * i as f64 / 2000.0).unwrap();
            mn = mn.min(s);
            mx = mx.max(s);
        }
        assert!((mn - lo).abs() < 1e-9 && (mx - hi).abs() < 1e-9);
        let trivial = (Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
        assert_eq!(squeeze_ratio(trivial, 0.7).unwrap(), 1.0);
        assert!(squeeze_bounds((Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0))).is_err());
    }

    #[test]
    fn jump_fluctuations() {
        let r = FluctuationRegime::InvertedJump { rho: 1.0 };
        let f0 = energy_variance_fock(&r, 0).unwrap();
        assert!(f0.mean.mantissa.abs() < 1e-15);
        assert!((f0.second.mantissa - 0.5).abs() < 1e-14);
        assert!((f0.variance.mantissa - 0.5).abs() < 1e-14);
        let f1 = energy_variance_fock(&r, 1).unwrap();
        assert!((f1.second.mantissa - 1.5).abs() < 1e-14);
        for rho in [0.5, 2.0, 3.0] {
            for n in 0..5u32 {
                let k = rho * rho;
                let m = (n * n + n) as f64;
                let e2 = (3.0 * (2.0 * m + 1.0) * (1.0 + k * k) - 2.0 * k * (2.0 * m - 1.0)) / 16.0;
                let sig = (m + 1.0) * (1.0 + k).powi(2) / 8.0;
                let f = energy_variance_fock(&FluctuationRegime::InvertedJump { rho }, n).unwrap();
                assert!((f.second.mantissa - e2).abs() < 1e-12 * e2);
                assert!((f.variance.mantissa - sig).abs() < 1e-12 * sig);
                let v = jump_v(rho).unwrap();
                let g = energy_variance_fock(
                    &FluctuationRegime::InvertedConstant {
                        v_pair: v,
                        kappa: rho,
                    },
                    n,
                )
                .unwrap();
                assert!((g.variance.mantissa - sig).abs() < 1e-12 * sig);
                let exact = energy_variance_fock(
                    &FluctuationRegime::Exact(mode(FrequencyProfile::SuddenJump { rho }, 0.4)),
                    n,
                )
                .unwrap();
                assert!((exact.variance.to_f64().unwrap() - sig).abs() < 1e-10 * sig);
            }
        }
    }

    #[test]
    fn revival_fluctuations() {
        let u = revival_u(0.25).unwrap();
        assert!((revival_variance_over_level_sq(u, 0) - 16.0).abs() < 1e-12);
        let f = energy_variance_fock(
            &FluctuationRegime::AdiabaticRevival {
                u_pair: u,
                omega: 2.0,
            },
            0,
        )
        .unwrap();
        assert!((f.variance.mantissa - 2.0 * 4.0 * 2.0).abs() < 1e-12);
        assert!((f.relative_variance() - 16.0 / 9.0).abs() < 1e-12);
        let none = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        for n in 0..6 {
            let f = energy_variance_fock(
                &FluctuationRegime::AdiabaticRevival {
                    u_pair: none,
                    omega: 3.0,
                },
                n,
            )
            .unwrap();
            assert_eq!(f.variance.mantissa, 0.0);
        }
    }

    #[test]
    fn exponential_energy_avoids_cancellation() {
        let init = InitialState::Gaussian {
            x2: 0.8,
            p2: 0.9,
            xp: 0.3,
            x0: 0.2,
            p0: 0.1,
        };
        let prof = FrequencyProfile::SuddenJump { rho: 2.0 };
        let c = TransitionCoefficients::for_profile(&prof).unwrap();
        for t in [0.0, 0.1, 0.7] {
            let m = mode_at(&prof, &c, t).unwrap();
            let s = propagate_second(&init, &m).unwrap();
            let direct = mean_energy(&s, m.gamma).to_f64().unwrap();
            let stable = mean_energy_in(&prof, &c, &init, &m, &s)
                .unwrap()
                .to_f64()
                .unwrap();
            assert!(close(stable, direct, 1e-11), "{t}: {stable} vs {direct}");
        }
        let m = mode_at(&prof, &c, 150.0).unwrap();
        let s = propagate_second(&init, &m).unwrap();
        let late = mean_energy_in(&prof, &c, &init, &m, &s)
            .unwrap()
            .to_f64()
            .unwrap();
        let early = mean_energy(
            &propagate_second(&init, &mode_at(&prof, &c, 0.0).unwrap()).unwrap(),
            -4.0,
        );
        assert!(close(late, early.to_f64().unwrap(), 1e-12));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn gaussian() -> impl Strategy<Value = InitialState> {
        (
            0.3f64..3.0,
            -1.0f64..1.0,
            -0.5f64..0.5,
            -0.5f64..0.5,
            0.0f64..1.0,
        )
            .prop_map(|(sx, c, x0, p0, extra)| {
                // σxσp − σxp² = 1/4 + extra by construction
                let sxp = 0.5 * c;
                let sp = (0.25 + extra + sxp * sxp) / sx;
                InitialState::Gaussian {
                    x2: sx + x0 * x0,
                    p2: sp + p0 * p0,
                    xp: 2.0 * (sxp + x0 * p0),
                    x0,
                    p0,
                }
            })
    }

    proptest! {
        #![proptest_config(crate::prop_config(64))]

        // only where the moments grow moderately, so the determinant keeps its digits
        #[test]
        fn invariant_is_conserved(init in gaussian(), rho in 0.2f64..3.0, t in -1.0f64..1.5) {
            let prof = FrequencyProfile::SuddenJump { rho };
            let c = TransitionCoefficients::for_profile(&prof).unwrap();
            let d0 = propagate_second(&init, &mode_at(&prof, &c, -1.0).unwrap()).unwrap().invariant_d().to_f64().unwrap();
            let d = propagate_second(&init, &mode_at(&prof, &c, t).unwrap()).unwrap().invariant_d().to_f64().unwrap();
            prop_assert!((d / d0 - 1.0).abs() < 1e-9, "{d} vs {d0}");
        }

        #[test]
        fn crossing_keeps_invariant(init in gaussian(), n in 0.5f64..4.0, g in 1.0f64..30.0, t in -1.0f64..0.3) {
            let prof = FrequencyProfile::PowerCrossing { n, omega_tau: g };
            let c = TransitionCoefficients::for_profile(&prof).unwrap();
            // the Gaussian is given in ω₀ = 1 units; rescale to ω₀ = G
            let InitialState::Gaussian { x2, p2, xp, x0, p0 } = init else { unreachable!() };
            let init = InitialState::Gaussian { x2: x2 / g, p2: p2 * g, xp, x0: x0 / g.sqrt(), p0: p0 * g.sqrt() };
            let d0 = propagate_second(&init, &mode_at(&prof, &c, -1.0).unwrap()).unwrap().invariant_d().to_f64().unwrap();
            let d = propagate_second(&init, &mode_at(&prof, &c, t).unwrap()).unwrap().invariant_d().to_f64().unwrap();
            prop_assert!((d / d0 - 1.0).abs() < 1e-9, "{d} vs {d0}");
        }

        #[test]
        fn jump_energy_matches_fock_form(n in 0u32..50, rho in 0.01f64..10.0) {
            let e = jump_energy(&InitialState::Fock(n), rho).unwrap();
            prop_assert!((e - jump_energy_fock(n, rho)).abs() <= 1e-12 * e.abs().max(1.0));
        }
    }
}
