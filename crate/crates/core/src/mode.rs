//! Classical mode ε(t), ε̇(t) for each stiffness profile.
//!
//! Units: τ = 1, ħ = m = 1. For the power-law profiles ω₀ = G; for the
//! jump and the constant inverted profile ω₀ = 1.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::scaled::MAX_EXPORT_EXPONENT;
use crate::specfun::{bessel_i_scaled, bessel_j, bessel_k_scaled, gamma};

/// Above this Bessel argument the inverted branch is returned with a
/// separate exponent instead of folding `e^y` into the mantissa.
pub const LOG_SCALE_THRESHOLD: f64 = 300.0;

/// Crossing neighbourhood: below this value of `y` the limiting forms are used.
const CROSSING_Y: f64 = 1e-8;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// The stiffness law γ(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrequencyProfile {
    /// γ = ω₀²|t|ⁿ before the crossing, −ω₀²tⁿ after it. `omega_tau` is G = ω₀τ.
    PowerCrossing { n: f64, omega_tau: f64 },
    /// Same zero crossing, but γ returns to +ω₀²tⁿ afterwards.
    PowerRevival { n: f64, omega_tau: f64 },
    /// γ jumps from ω₀² = 1 to −ρ² at t = 0.
    SuddenJump { rho: f64 },
    /// γ = ω₀² for all t.
    ConstantHarmonic { omega0: f64 },
    /// γ = −κ² for all t; the mode weights come from the supplied v± pair.
    ConstantInverted { kappa: f64 },
}

/// Derived parameters of the Bessel transformation for a power profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerParams {
    pub n: f64,
    pub omega_tau: f64,
    /// Bessel order 1/(n+2).
    pub nu: f64,
    /// Exponent of |t| in y: 1 + n/2.
    pub b: f64,
    /// Argument at t = −τ: 2Gν.
    pub g: f64,
}

impl PowerParams {
    pub fn new(n: f64, omega_tau: f64) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return domain(format!("power index must be positive, got {n}"));
        }
        if !(omega_tau > 0.0) || !omega_tau.is_finite() {
            return domain(format!("G must be positive, got {omega_tau}"));
        }
        let nu = 1.0 / (n + 2.0);
        Ok(Self {
            n,
            omega_tau,
            nu,
            b: 1.0 + 0.5 * n,
            g: 2.0 * omega_tau * nu,
        })
    }

    /// y(t) = g|t|^b.
    pub fn y(&self, t: f64) -> f64 {
        self.g * t.abs().powf(self.b)
    }

    /// |t| below which the crossing limits replace the Bessel forms.
    pub fn crossing_window(&self) -> f64 {
        (CROSSING_Y / self.g).powf(1.0 / self.b)
    }

    /// Instantaneous frequency ω(t) = ω₀|t|^{n/2}.
    pub fn omega(&self, t: f64) -> f64 {
        self.omega_tau * t.abs().powf(0.5 * self.n)
    }
}

impl FrequencyProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::PowerCrossing { n, omega_tau } | Self::PowerRevival { n, omega_tau } => {
                PowerParams::new(n, omega_tau).map(|_| ())
            }
            Self::SuddenJump { rho } => positive("rho", rho),
            Self::ConstantHarmonic { omega0 } => positive("omega0", omega0),
            Self::ConstantInverted { kappa } => positive("kappa", kappa),
        }
    }

    /// Frequency of the initial harmonic stage.
    pub fn omega0(&self) -> f64 {
        match *self {
            Self::PowerCrossing { omega_tau, .. } | Self::PowerRevival { omega_tau, .. } => {
                omega_tau
            }
            Self::ConstantHarmonic { omega0 } => omega0,
            Self::SuddenJump { .. } | Self::ConstantInverted { .. } => 1.0,
        }
    }

    pub fn power_params(&self) -> Option<PowerParams> {
        match *self {
            Self::PowerCrossing { n, omega_tau } | Self::PowerRevival { n, omega_tau } => {
                PowerParams::new(n, omega_tau).ok()
            }
            _ => None,
        }
    }

    /// Earliest time at which the mode is defined.
    pub fn start_time(&self) -> f64 {
        match self {
            Self::ConstantHarmonic { .. } | Self::ConstantInverted { .. } => f64::NEG_INFINITY,
            _ => -1.0,
        }
    }

    /// Points where γ(t) or one of its derivatives is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::PowerCrossing { .. } | Self::PowerRevival { .. } | Self::SuddenJump { .. } => {
                vec![0.0]
            }
            _ => Vec::new(),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be positive and finite, got {v}"))
    }
}

/// γ(t) for the given profile.
pub fn gamma_of_t(profile: &FrequencyProfile, t: f64) -> f64 {
    match *profile {
        FrequencyProfile::PowerCrossing { n, omega_tau } => {
            let w2 = omega_tau * omega_tau * t.abs().powf(n);
            if t <= 0.0 {
                w2
            } else {
                -w2
            }
        }
        FrequencyProfile::PowerRevival { n, omega_tau } => omega_tau * omega_tau * t.abs().powf(n),
        FrequencyProfile::SuddenJump { rho } => {
            if t < 0.0 {
                1.0
            } else {
                -rho * rho
            }
        }
        FrequencyProfile::ConstantHarmonic { omega0 } => omega0 * omega0,
        FrequencyProfile::ConstantInverted { kappa } => -kappa * kappa,
    }
}

/// Weights of the mode in the Bessel, oscillatory and exponential bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionCoefficients {
    pub a_minus: Complex64,
    pub b_minus: Complex64,
    pub a_plus: Complex64,
    pub b_plus: Complex64,
    /// (u₊, u₋) of the late-time oscillatory form, when the stiffness revives.
    pub u_pair: Option<(Complex64, Complex64)>,
    /// (v₊, v₋) of the exponential form, for constant negative stiffness.
    pub v_pair: Option<(Complex64, Complex64)>,
}

impl TransitionCoefficients {
    fn empty() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            a_minus: z,
            b_minus: z,
            a_plus: z,
            b_plus: z,
            u_pair: None,
            v_pair: None,
        }
    }

    /// Coefficients for a constant inverted stage with explicit weights.
    pub fn with_v(v_plus: Complex64, v_minus: Complex64) -> Self {
        Self {
            v_pair: Some((v_plus, v_minus)),
            ..Self::empty()
        }
    }

    /// Coefficients matching the initial conditions of `profile`.
    ///
    /// For [`FrequencyProfile::ConstantInverted`] there is no natural
    /// initial state; use [`TransitionCoefficients::with_v`] instead.
    pub fn for_profile(profile: &FrequencyProfile) -> Result<Self> {
        profile.validate()?;
        match *profile {
            FrequencyProfile::PowerCrossing { n, omega_tau }
            | FrequencyProfile::PowerRevival { n, omega_tau } => {
                let p = PowerParams::new(n, omega_tau)?;
                let (a_minus, b_minus) = coefficients_pre(p.nu, omega_tau)?;
                let (a_plus, b_plus) = coefficients_post(a_minus, b_minus);
                let u_pair = match profile {
                    FrequencyProfile::PowerRevival { .. } => Some(revival_u(p.nu)?),
                    _ => None,
                };
                Ok(Self {
                    a_minus,
                    b_minus,
                    a_plus,
                    b_plus,
                    u_pair,
                    v_pair: None,
                })
            }
            FrequencyProfile::SuddenJump { rho } => {
                // `jump_v` assumes ε(0) = 1; the mode starts at t = −1
                // and reaches t = 0 with phase e^{i}
                let (vp, vm) = jump_v(rho)?;
                let phase = Complex64::from_polar(1.0, 1.0);
                Ok(Self::with_v(vp * phase, vm * phase))
            }
            FrequencyProfile::ConstantHarmonic { .. } => Ok(Self::empty()),
            FrequencyProfile::ConstantInverted { .. } => Err(Error::Precondition(
                "constant inverted profile needs explicit v weights".into(),
            )),
        }
    }
}

/// (A₋, B₋) fixed by ε(−1) = G^{-1/2}, ε̇(−1) = iG^{1/2}.
pub fn coefficients_pre(nu: f64, omega_tau: f64) -> Result<(Complex64, Complex64)> {
    if !(nu > 0.0 && nu < 0.5) {
        return domain(format!("order must lie in (0, 1/2), got {nu}"));
    }
    positive("G", omega_tau)?;
    let g = 2.0 * omega_tau * nu;
    let c = nu * PI * omega_tau.sqrt() / (nu * PI).sin();
    let a = c * Complex64::new(bessel_j(1.0 - nu, g)?, -bessel_j(-nu, g)?);
    let b = c * Complex64::new(bessel_j(nu - 1.0, g)?, bessel_j(nu, g)?);
    Ok((a, b))
}

/// Continuity at the crossing: A₊ = −A₋, B₊ = B₋.
pub fn coefficients_post(a_minus: Complex64, b_minus: Complex64) -> (Complex64, Complex64) {
    (-a_minus, b_minus)
}

/// Late-time oscillatory weights after a single power-law crossing.
pub fn revival_u(nu: f64) -> Result<(Complex64, Complex64)> {
    if !(nu > 0.0 && nu < 0.5) {
        return domain(format!("order must lie in (0, 1/2), got {nu}"));
    }
    let s = (nu * PI).sin();
    let c = (nu * PI).cos();
    Ok((Complex64::new(1.0 / s, 0.0), Complex64::new(0.0, c / s)))
}

/// Exponential weights right after a sudden jump to γ = −ρ² (ω₀ = 1).
pub fn jump_v(rho: f64) -> Result<(Complex64, Complex64)> {
    positive("rho", rho)?;
    let a = rho.sqrt();
    let b = 1.0 / a;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok((Complex64::new(s * a, s * b), Complex64::new(s * a, -s * b)))
}

/// Growing/decaying decomposition ε = grow·f + decay·h with real f, h.
///
/// Lets the Wronskian be evaluated as (grow·decay* − c.c.)·(ḟh − fḣ), which
/// avoids subtracting two exponentially large numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSplit {
    pub grow: Complex64,
    pub decay: Complex64,
    /// ḟh − fḣ, evaluated from the basis functions themselves.
    pub basis_wronskian: f64,
}

/// Mode value at one instant. The true values are `eps·e^{log_scale}` and
/// `eps_dot·e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalMode {
    pub t: f64,
    pub gamma: f64,
    pub omega0: f64,
    pub eps: Complex64,
    pub eps_dot: Complex64,
    pub log_scale: f64,
    pub split: Option<ModeSplit>,
}

impl ClassicalMode {
    /// ε̇ε* − ε̇*ε; uses the split form when one is available.
    pub fn wronskian(&self) -> Complex64 {
        match self.split {
            Some(s) => (s.grow * s.decay.conj() - s.grow.conj() * s.decay) * s.basis_wronskian,
            None => self.wronskian_direct(),
        }
    }

    /// ε̇ε* − ε̇*ε from the stored values, including the scale factor.
    pub fn wronskian_direct(&self) -> Complex64 {
        let w = self.eps_dot * self.eps.conj() - self.eps_dot.conj() * self.eps;
        w * (2.0 * self.log_scale).exp()
    }

    /// |W − 2i|.
    pub fn wronskian_error(&self) -> f64 {
        (self.wronskian() - 2.0 * I).norm()
    }

    /// (ε, ε̇) as plain complex numbers; fails past e^700.
    pub fn unscaled(&self) -> Result<(Complex64, Complex64)> {
        if self.log_scale == 0.0 {
            return Ok((self.eps, self.eps_dot));
        }
        let big = self.eps.norm().max(self.eps_dot.norm()).ln() + self.log_scale;
        if big > MAX_EXPORT_EXPONENT {
            return Err(Error::Overflow { exponent: big });
        }
        let f = self.log_scale.exp();
        Ok((self.eps * f, self.eps_dot * f))
    }

    /// γ|ε|² + |ε̇|² as (mantissa, exponent).
    pub fn energy_form(&self) -> (f64, f64) {
        (
            self.gamma * self.eps.norm_sqr() + self.eps_dot.norm_sqr(),
            2.0 * self.log_scale,
        )
    }

    fn plain(t: f64, gamma: f64, omega0: f64, eps: Complex64, eps_dot: Complex64) -> Self {
        Self {
            t,
            gamma,
            omega0,
            eps,
            eps_dot,
            log_scale: 0.0,
            split: None,
        }
    }
}

/// d/dt of √|t|·Z(y(t)) given `combo` = Z + (y/ν)·dZ/dy.
///
/// dy/d|t| = y/(2ν|t|), and d|t|/dt flips sign before the crossing; this is
/// the only place that sign is applied.
fn time_derivative(t: f64, combo: Complex64) -> Complex64 {
    let d_abs_t = if t < 0.0 { -1.0 } else { 1.0 };
    combo * (d_abs_t / (2.0 * t.abs().sqrt()))
}

/// Evaluate the mode at time `t`.
pub fn mode_at(
    profile: &FrequencyProfile,
    coeffs: &TransitionCoefficients,
    t: f64,
) -> Result<ClassicalMode> {
    profile.validate()?;
    if !t.is_finite() {
        return domain(format!("non-finite time {t}"));
    }
    if t < profile.start_time() {
        return domain(format!("t = {t} precedes the initial time -1"));
    }
    let gam = gamma_of_t(profile, t);
    let omega0 = profile.omega0();
    match *profile {
        FrequencyProfile::ConstantHarmonic { omega0 } => {
            let e = Complex64::from_polar(omega0.powf(-0.5), omega0 * (t + 1.0));
            Ok(ClassicalMode::plain(t, gam, omega0, e, I * omega0 * e))
        }
        FrequencyProfile::SuddenJump { rho } => {
            if t < 0.0 {
                let e = Complex64::from_polar(1.0, t + 1.0);
                return Ok(ClassicalMode::plain(t, gam, 1.0, e, I * e));
            }
            let (vp, vm) = coeffs
                .v_pair
                .ok_or_else(|| Error::Precondition("jump coefficients lack the v pair".into()))?;
            Ok(exponential_mode(t, gam, rho, vp, vm))
        }
        FrequencyProfile::ConstantInverted { kappa } => {
            let (vp, vm) = coeffs.v_pair.ok_or_else(|| {
                Error::Precondition("constant inverted profile needs the v pair".into())
            })?;
            Ok(exponential_mode(t, gam, kappa, vp, vm))
        }
        FrequencyProfile::PowerCrossing { n, omega_tau }
        | FrequencyProfile::PowerRevival { n, omega_tau } => {
            let p = PowerParams::new(n, omega_tau)?;
            let revival = matches!(profile, FrequencyProfile::PowerRevival { .. });
            let mut m = if t.abs() < p.crossing_window() {
                crossing_limit(&p, coeffs, t)?
            } else if t < 0.0 {
                oscillatory_branch(&p, coeffs.a_minus, coeffs.b_minus, t)?
            } else if revival {
                oscillatory_branch(&p, coeffs.a_plus, coeffs.b_plus, t)?
            } else {
                inverted_branch(&p, coeffs, t)?
            };
            m.gamma = gam;
            m.omega0 = omega0;
            Ok(m)
        }
    }
}

/// ε = (2κ)^{-1/2}(v₊e^{κt} + v₋e^{−κt}).
fn exponential_mode(t: f64, gam: f64, kappa: f64, vp: Complex64, vm: Complex64) -> ClassicalMode {
    let kt = kappa * t;
    let (log_scale, up, down) = if kt > LOG_SCALE_THRESHOLD {
        (kt, 1.0, (-2.0 * kt).exp())
    } else {
        (0.0, kt.exp(), (-kt).exp())
    };
    let norm = (2.0 * kappa).powf(-0.5);
    let eps = norm * (vp * up + vm * down);
    let eps_dot = norm * kappa * (vp * up - vm * down);
    // f = e^{κt}/√(2κ), h = e^{−κt}/√(2κ): ḟh − fḣ = 1, computed from the pieces
    let f_h = norm * norm;
    let basis_wronskian = kappa * f_h + kappa * f_h;
    ClassicalMode {
        t,
        gamma: gam,
        omega0: 1.0,
        eps,
        eps_dot,
        log_scale,
        split: Some(ModeSplit {
            grow: vp,
            decay: vm,
            basis_wronskian,
        }),
    }
}

/// ε = √|t|(A J_ν(y) + B J_{−ν}(y)) on either side of the crossing.
fn oscillatory_branch(
    p: &PowerParams,
    a: Complex64,
    b: Complex64,
    t: f64,
) -> Result<ClassicalMode> {
    let nu = p.nu;
    let y = p.y(t);
    let root = t.abs().sqrt();
    let jn = bessel_j(nu, y)?;
    let jmn = bessel_j(-nu, y)?;
    let jn1 = bessel_j(nu - 1.0, y)?;
    let j1n = bessel_j(1.0 - nu, y)?;
    let eps = root * (a * jn + b * jmn);
    // J_ν + (y/ν)J'_ν = (y/ν)J_{ν−1};  J_{−ν} + (y/ν)J'_{−ν} = −(y/ν)J_{1−ν}
    let combo = (y / nu) * (a * jn1 - b * j1n);
    Ok(ClassicalMode::plain(
        t,
        0.0,
        0.0,
        eps,
        time_derivative(t, combo),
    ))
}

/// Inverted branch in the (I_ν, K_ν) basis: ε = √t(P I_ν + Q K_ν) with
/// P = A₊ + B₊ and Q = (2/π) sin(νπ) B₊.
fn inverted_branch(
    p: &PowerParams,
    coeffs: &TransitionCoefficients,
    t: f64,
) -> Result<ClassicalMode> {
    let nu = p.nu;
    let y = p.y(t);
    let root = t.sqrt();
    let grow = coeffs.a_plus + coeffs.b_plus;
    let decay = coeffs.b_plus * (2.0 / PI * (nu * PI).sin());
    let i_n = bessel_i_scaled(nu, y)?;
    let i_n1 = bessel_i_scaled(nu - 1.0, y)?;
    let k_n = bessel_k_scaled(nu, y)?;
    let k_1n = bessel_k_scaled(1.0 - nu, y)?;
    // e^{−y}I and e^{y}K: relative weight of the decaying part is e^{−2y}
    let (log_scale, up, down) = if y > LOG_SCALE_THRESHOLD {
        (y, 1.0, (-2.0 * y).exp())
    } else {
        (0.0, y.exp(), (-y).exp())
    };
    let eps = root * (grow * (i_n * up) + decay * (k_n * down));
    // I_ν + (y/ν)I'_ν = (y/ν)I_{ν−1};  K_ν + (y/ν)K'_ν = −(y/ν)K_{1−ν}
    let combo = (y / nu) * (grow * (i_n1 * up) - decay * (k_1n * down));
    let basis_wronskian = y / (2.0 * nu) * (i_n1 * k_n + i_n * k_1n);
    Ok(ClassicalMode {
        t,
        gamma: 0.0,
        omega0: 0.0,
        eps,
        eps_dot: time_derivative(t, combo),
        log_scale,
        split: Some(ModeSplit {
            grow,
            decay,
            basis_wronskian,
        }),
    })
}

/// Limiting forms near the crossing: ε ≈ ε(0) + ε̇(0)t, ε̇ ≈ ε̇(0).
fn crossing_limit(
    p: &PowerParams,
    coeffs: &TransitionCoefficients,
    t: f64,
) -> Result<ClassicalMode> {
    let (e0, d0) = crossing_values(p, coeffs)?;
    Ok(ClassicalMode::plain(t, 0.0, 0.0, e0 + d0 * t, d0))
}

/// (ε(0), ε̇(0)) from the leading small-argument terms.
pub fn crossing_values(
    p: &PowerParams,
    coeffs: &TransitionCoefficients,
) -> Result<(Complex64, Complex64)> {
    let nu = p.nu;
    let half_g = 0.5 * p.g;
    let e0 = coeffs.b_minus * (half_g.powf(-nu) / gamma(1.0 - nu)?);
    let d0 = -coeffs.a_minus * (half_g.powf(nu) / gamma(1.0 + nu)?);
    Ok((e0, d0))
}

/// Quasiclassical approximation away from the crossing.
///
/// Before the crossing ε ≈ ω^{-1/2}e^{iφ_τ}; after a revival
/// ε ≈ ω^{-1/2}e^{ig}(u₊e^{iφ} + u₋e^{−iφ}), where g = φ_τ(0).
pub fn adiabatic_mode(profile: &FrequencyProfile, t: f64) -> Result<ClassicalMode> {
    let p = profile
        .power_params()
        .ok_or_else(|| Error::Precondition("adiabatic forms need a power profile".into()))?;
    if t == 0.0 || t < -1.0 {
        return domain(format!("adiabatic form undefined at t = {t}"));
    }
    let w = p.omega(t);
    let gam = gamma_of_t(profile, t);
    if t < 0.0 {
        let phase = p.g - p.y(t);
        let e = Complex64::from_polar(w.powf(-0.5), phase);
        let mut m = ClassicalMode::plain(t, gam, p.omega_tau, e, I * w * e);
        m.omega0 = p.omega_tau;
        return Ok(m);
    }
    match profile {
        FrequencyProfile::PowerRevival { .. } => {
            let (up, um) = revival_u(p.nu)?;
            let phi = p.y(t);
            let lead = Complex64::from_polar(1.0, p.g);
            let fw = up * Complex64::from_polar(1.0, phi);
            let bw = um * Complex64::from_polar(1.0, -phi);
            let eps = lead * (fw + bw) * w.powf(-0.5);
            let eps_dot = lead * I * (fw - bw) * w.sqrt();
            Ok(ClassicalMode::plain(t, gam, p.omega_tau, eps, eps_dot))
        }
        _ => domain("no oscillatory adiabatic form after an inverting crossing"),
    }
}
