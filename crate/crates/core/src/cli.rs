//! Command-line front end. Everything here writes plain CSV: one `#` line
//! echoing the configuration, a header, then rows in parameter-list order.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mode::{jump_v, mode_at, revival_u, FrequencyProfile, TransitionCoefficients};
use crate::moments::{
    adiabatic_prediction, energy_ratio_exact, energy_report, energy_variance_fock, mean_energy_in,
    propagate_second, AdiabaticRegime, FluctuationRegime, InitialState,
};
use crate::oracle::{integrate_mode_with, OdeOptions, TOL_MAX, TOL_MIN};
use crate::scaled::{ScaledReal, MAX_EXPORT_EXPONENT};
use crate::spectra::{SpectralDensity, SpectralParams, MAX_FOCK_INDEX};
use crate::validation::{oracle_deviation, run_checks, Comparison};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Inverted-oscillator simulations, energy laws and spectral densities.
#[derive(Debug, Parser)]
#[command(name = "invosc", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mode, moments and energy on a time grid.
    Simulate(SimulateArgs),
    /// Exact energy ratio and the applicable adiabatic laws at one instant.
    Ratio(RatioArgs),
    /// Spectral densities of the energy after a jump.
    Distribution(DistributionArgs),
    /// Energy mean, second moment and variance for Fock initial states.
    Fluctuations(FluctuationsArgs),
    /// Run every acceptance check; exit 1 if any fails.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileKind {
    /// γ ∝ |t|ⁿ, negative after t = 0.
    Power,
    /// γ ∝ |t|ⁿ, positive again after t = 0.
    Revival,
    /// γ jumps from 1 to −ρ² at t = 0.
    Jump,
    /// Constant γ = G².
    Harmonic,
    /// Constant γ = −κ², starting from the ω = 1 state at t = 0.
    Inverted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RatioProfile {
    Power,
    Revival,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    AdiabaticRevival,
    ExactRevival,
    ExactCrossing,
    Jump,
    InvertedConstant,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "power")]
    pub profile: ProfileKind,
    /// Power index of the stiffness law.
    #[arg(long, default_value_t = 2.0)]
    pub n: f64,
    /// G = ω₀τ (power, revival, harmonic).
    #[arg(long = "G")]
    pub omega_tau: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// fock:N or gaussian:x2,p2,xp,x0,p0 (moments at t = −τ).
    #[arg(long, default_value = "fock:0", value_parser = parse_initial)]
    pub initial: InitialState,
    #[arg(long, default_value_t = -1.0)]
    pub t0: f64,
    #[arg(long, default_value_t = 2.0)]
    pub t1: f64,
    #[arg(long, default_value_t = 601)]
    pub steps: usize,
    /// Add columns from the ODE integrator and their deviation.
    #[arg(long)]
    pub oracle: bool,
    /// Integrator tolerance for --oracle.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Physical ω₀; rescales the output.
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Physical τ; rescales the output.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RatioArgs {
    #[arg(long, value_enum, default_value = "power")]
    pub profile: RatioProfile,
    #[arg(long, default_value_t = 2.0)]
    pub n: f64,
    /// Comma-separated list of G = ω₀τ.
    #[arg(long = "G", value_delimiter = ',', default_value = "50")]
    pub omega_tau: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[arg(long, default_value = "fock:0", value_parser = parse_initial)]
    pub initial: InitialState,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DistributionArgs {
    /// Comma-separated Fock indices.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub n: Vec<u32>,
    /// Comma-separated ρ values.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub rho: Vec<f64>,
    #[arg(long, default_value_t = -12.0)]
    pub emin: f64,
    #[arg(long, default_value_t = 12.0)]
    pub emax: f64,
    #[arg(long, default_value_t = 601)]
    pub points: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FluctuationsArgs {
    /// Comma-separated sources; all of them by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub source: Vec<Source>,
    /// Comma-separated Fock indices N.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub fock: Vec<u32>,
    /// Power index for the revival and crossing sources.
    #[arg(long, default_value_t = 2.0)]
    pub n: f64,
    #[arg(long = "G", default_value_t = 100.0)]
    pub omega_tau: f64,
    /// Time at which the power-law sources are evaluated.
    #[arg(long, default_value_t = 1.5)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Failure of a subcommand, already sorted by exit code.
#[derive(Debug)]
pub enum CliFailure {
    Usage(String),
    Numerical(Error),
}

impl From<Error> for CliFailure {
    fn from(e: Error) -> Self {
        CliFailure::Numerical(e)
    }
}

type CliResult<T> = std::result::Result<T, CliFailure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliFailure::Usage(msg.into()))
}

pub fn parse_initial(s: &str) -> std::result::Result<InitialState, String> {
    let state = if let Some(n) = s.strip_prefix("fock:") {
        InitialState::Fock(
            n.trim()
                .parse()
                .map_err(|e| format!("bad Fock index {n:?}: {e}"))?,
        )
    } else if let Some(rest) = s.strip_prefix("gaussian:") {
        let v: Vec<f64> = rest
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad number {x:?}: {e}"))
            })
            .collect::<std::result::Result<_, _>>()?;
        if v.len() != 5 {
            return Err(format!(
                "gaussian needs x2,p2,xp,x0,p0, got {} values",
                v.len()
            ));
        }
        InitialState::Gaussian {
            x2: v[0],
            p2: v[1],
            xp: v[2],
            x0: v[3],
            p0: v[4],
        }
    } else {
        return Err(format!(
            "expected fock:N or gaussian:x2,p2,xp,x0,p0, got {s:?}"
        ));
    };
    state.validate().map_err(|e| e.to_string())?;
    Ok(state)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![a];
    }
    (0..points)
        .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
        .collect()
}

/// (mantissa, exponent) with the exponent folded away when e^exponent fits.
fn folded(v: ScaledReal) -> (f64, f64) {
    let v = v.normalized();
    if v.mantissa == 0.0 {
        return (0.0, 0.0);
    }
    if v.ln_abs().abs() <= MAX_EXPORT_EXPONENT {
        (v.mantissa * v.exponent.exp(), 0.0)
    } else {
        (v.mantissa, v.exponent)
    }
}

/// Mantissa of `v` relative to the exponent `e`.
fn at_exponent(v: ScaledReal, e: f64) -> f64 {
    v.mantissa * (v.exponent - e).exp()
}

fn finite_positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        usage(format!("--{name} must be positive and finite, got {v}"))
    }
}

/// Profile in internal units plus the physical time unit.
fn resolve_profile(a: &SimulateArgs) -> CliResult<(FrequencyProfile, f64)> {
    for (name, v) in [("omega0", a.omega0), ("tau", a.tau)] {
        if let Some(v) = v {
            finite_positive(name, v)?;
        }
    }
    let power_like = matches!(
        a.profile,
        ProfileKind::Power | ProfileKind::Revival | ProfileKind::Harmonic
    );
    if power_like {
        let g = match (a.omega_tau, a.omega0, a.tau) {
            (Some(g), Some(w), Some(t)) => {
                if (g - w * t).abs() > 1e-12 * g.abs() {
                    return usage(format!(
                        "--G {g} disagrees with --omega0 × --tau = {}",
                        w * t
                    ));
                }
                g
            }
            (Some(g), _, _) => g,
            (None, Some(w), Some(t)) => w * t,
            (None, _, _) => return usage("give --G, or both --omega0 and --tau"),
        };
        finite_positive("G", g)?;
        let unit = match (a.tau, a.omega0) {
            (Some(t), _) => t,
            (None, Some(w)) => g / w,
            (None, None) => 1.0,
        };
        let profile = match a.profile {
            ProfileKind::Power => FrequencyProfile::PowerCrossing {
                n: a.n,
                omega_tau: g,
            },
            ProfileKind::Revival => FrequencyProfile::PowerRevival {
                n: a.n,
                omega_tau: g,
            },
            _ => FrequencyProfile::ConstantHarmonic { omega0: g },
        };
        Ok((profile, unit))
    } else {
        if a.omega_tau.is_some() || a.tau.is_some() {
            return usage("--G and --tau apply to the power, revival and harmonic profiles");
        }
        let profile = match a.profile {
            ProfileKind::Jump => FrequencyProfile::SuddenJump { rho: a.rho },
            _ => FrequencyProfile::ConstantInverted { kappa: a.kappa },
        };
        Ok((profile, a.omega0.map_or(1.0, |w| 1.0 / w)))
    }
}

fn simulate(a: &SimulateArgs) -> CliResult<String> {
    let (profile, unit) = resolve_profile(a)?;
    profile
        .validate()
        .map_err(|e| CliFailure::Usage(e.to_string()))?;
    if a.steps == 0 {
        return usage("--steps must be at least 1");
    }
    if !(a.t0.is_finite() && a.t1.is_finite()) || (a.steps > 1 && !(a.t1 > a.t0)) {
        return usage(format!("need finite --t0 < --t1, got [{}, {}]", a.t0, a.t1));
    }
    if a.t0 < profile.start_time() {
        return usage(format!("--t0 {} precedes the initial time -1", a.t0));
    }
    let coeffs = match profile {
        FrequencyProfile::ConstantInverted { kappa } => {
            let (vp, vm) = jump_v(kappa)?;
            TransitionCoefficients::with_v(vp, vm)
        }
        _ => TransitionCoefficients::for_profile(&profile)?,
    };
    let times = grid(a.t0, a.t1, a.steps);
    let oracle = if a.oracle {
        if matches!(profile, FrequencyProfile::ConstantInverted { .. }) {
            return usage("--oracle is not available for the inverted profile");
        }
        if a.t0 < -1.0 || !(a.t1 > -1.0) {
            return usage("--oracle needs -1 <= t0 and t1 > -1");
        }
        if !(TOL_MIN..=TOL_MAX).contains(&a.tol) {
            return usage(format!(
                "--tol must lie in [{TOL_MIN:e}, {TOL_MAX:e}], got {:e}",
                a.tol
            ));
        }
        let opts = OdeOptions::new(a.tol).with_samples(times.clone());
        Some(integrate_mode_with(&profile, -1.0, a.t1.max(-1.0 + f64::EPSILON), &opts)?.samples)
    } else {
        None
    };

    let omega0 = profile.omega0();
    let e0 = a.initial.initial_energy(omega0);
    let root = unit.sqrt();
    let rows = times
        .par_iter()
        .enumerate()
        .map(|(i, &t)| -> Result<String> {
            let mode = mode_at(&profile, &coeffs, t)?;
            let state = propagate_second(&a.initial, &mode)?;
            let ls = mode.log_scale;
            let energy = mean_energy_in(&profile, &coeffs, &a.initial, &mode, &state)?;
            let ratio = energy.scale(1.0 / e0);
            let e2 = 2.0 * ls;
            let mut cols = vec![
                t * unit,
                mode.eps.re * root,
                mode.eps.im * root,
                mode.eps_dot.re / root,
                mode.eps_dot.im / root,
                state.x2 * unit,
                state.p2 / unit,
                state.xp,
                at_exponent(energy, e2) / unit,
                at_exponent(ratio, e2),
                mode.wronskian_error(),
                ls,
            ];
            if let Some(samples) = &oracle {
                let s = &samples[i];
                let (e, d) = s.at_scale(ls);
                cols.extend([
                    e.re * root,
                    e.im * root,
                    d.re / root,
                    d.im / root,
                    oracle_deviation(&mode, s),
                ]);
            }
            if let Some(bad) = cols.iter().find(|v| !v.is_finite()) {
                return Err(Error::Overflow { exponent: *bad });
            }
            Ok(cols.iter().map(|&v| num(v)).collect::<Vec<_>>().join(","))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = format!("# invosc simulate {a:?} time_unit={unit}\n");
    out.push_str(
        "t,eps_re,eps_im,epsdot_re,epsdot_im,x2,p2,xp,energy,ratio,wronskian_abs_err,log_scale",
    );
    if oracle.is_some() {
        out.push_str(",oracle_eps_re,oracle_eps_im,oracle_epsdot_re,oracle_epsdot_im,oracle_dev");
    }
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}

fn ratio_rows(a: &RatioArgs, g: f64) -> Result<Vec<(&'static str, ScaledReal)>> {
    let profile = match a.profile {
        RatioProfile::Power => FrequencyProfile::PowerCrossing {
            n: a.n,
            omega_tau: g,
        },
        RatioProfile::Revival => FrequencyProfile::PowerRevival {
            n: a.n,
            omega_tau: g,
        },
    };
    let p = profile
        .power_params()
        .ok_or_else(|| Error::Config("not a power profile".into()))?;
    let coeffs = TransitionCoefficients::for_profile(&profile)?;
    let t = a.t;
    let mut rows = vec![(
        "exact",
        energy_report(&profile, &coeffs, &a.initial, t)?.ratio,
    )];
    if a.profile == RatioProfile::Power && a.initial.is_special(g) {
        rows.push(("kfunction", energy_ratio_exact(p.nu, g, t)?));
    }
    if t < 0.0 {
        rows.push((
            "adiabatic_pre",
            adiabatic_prediction(AdiabaticRegime::Pre, &p, t, &a.initial)?,
        ));
    }
    if t.abs() <= p.crossing_window() && a.initial.is_special(g) {
        rows.push((
            "adiabatic_crossing",
            adiabatic_prediction(AdiabaticRegime::Crossing, &p, t, &a.initial)?,
        ));
    }
    if t > 0.0 {
        let (name, regime) = match a.profile {
            RatioProfile::Power => ("adiabatic_inverted", AdiabaticRegime::InvertedAsymptotic),
            RatioProfile::Revival => ("adiabatic_revival", AdiabaticRegime::Revival),
        };
        rows.push((name, adiabatic_prediction(regime, &p, t, &a.initial)?));
    }
    Ok(rows)
}

fn ratio(a: &RatioArgs) -> CliResult<String> {
    if a.omega_tau.is_empty() {
        return usage("--G needs at least one value");
    }
    for &g in &a.omega_tau {
        FrequencyProfile::PowerCrossing {
            n: a.n,
            omega_tau: g,
        }
        .validate()
        .map_err(|e| CliFailure::Usage(e.to_string()))?;
    }
    if !(a.t >= -1.0 && a.t.is_finite()) {
        return usage(format!("--t must be finite and >= -1, got {}", a.t));
    }
    let blocks = a
        .omega_tau
        .par_iter()
        .map(|&g| ratio_rows(a, g))
        .collect::<Result<Vec<_>>>()?;
    let mut out = format!("# invosc ratio {a:?}\nG,t,quantity,mantissa,exponent\n");
    for (g, rows) in a.omega_tau.iter().zip(blocks) {
        for (name, v) in rows {
            let (m, e) = folded(v);
            writeln!(out, "{},{},{name},{},{}", num(*g), num(a.t), num(m), num(e))
                .expect("string write");
        }
    }
    Ok(out)
}

fn distribution(a: &DistributionArgs) -> CliResult<String> {
    if a.n.is_empty() || a.rho.is_empty() {
        return usage("--n and --rho need at least one value each");
    }
    if let Some(&n) = a.n.iter().find(|&&n| n > MAX_FOCK_INDEX) {
        return usage(format!(
            "--n {n} exceeds the supported maximum {MAX_FOCK_INDEX}"
        ));
    }
    for &r in &a.rho {
        finite_positive("rho", r)?;
    }
    if a.points == 0
        || !(a.emin.is_finite() && a.emax.is_finite())
        || (a.points > 1 && !(a.emax > a.emin))
    {
        return usage("need --points >= 1 and finite --emin < --emax");
    }
    let densities =
        a.n.iter()
            .flat_map(|&n| a.rho.iter().map(move |&r| (n, r)))
            .map(|(n, r)| SpectralDensity::new(SpectralParams::new(n, r)?))
            .collect::<Result<Vec<_>>>()?;
    let energies = grid(a.emin, a.emax, a.points);
    let rows = energies
        .par_iter()
        .map(|&e| -> Result<String> {
            let mut line = num(e);
            for d in &densities {
                line.push(',');
                line.push_str(&num(d.value(e)?));
            }
            Ok(line)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = format!("# invosc distribution {a:?}\ne_tilde");
    for d in &densities {
        write!(out, ",P_n{}_rho{}", d.params.n, d.params.rho).expect("string write");
    }
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}

fn fluctuation_regime(a: &FluctuationsArgs, source: Source) -> Result<FluctuationRegime> {
    Ok(match source {
        Source::AdiabaticRevival => {
            let p = crate::mode::PowerParams::new(a.n, a.omega_tau)?;
            FluctuationRegime::AdiabaticRevival {
                u_pair: revival_u(p.nu)?,
                omega: p.omega(a.t),
            }
        }
        Source::ExactRevival | Source::ExactCrossing => {
            let profile = if source == Source::ExactRevival {
                FrequencyProfile::PowerRevival {
                    n: a.n,
                    omega_tau: a.omega_tau,
                }
            } else {
                FrequencyProfile::PowerCrossing {
                    n: a.n,
                    omega_tau: a.omega_tau,
                }
            };
            let c = TransitionCoefficients::for_profile(&profile)?;
            FluctuationRegime::Exact(mode_at(&profile, &c, a.t)?)
        }
        Source::Jump => FluctuationRegime::InvertedJump { rho: a.rho },
        Source::InvertedConstant => FluctuationRegime::InvertedConstant {
            v_pair: jump_v(a.kappa)?,
            kappa: a.kappa,
        },
    })
}

fn source_name(s: Source) -> &'static str {
    match s {
        Source::AdiabaticRevival => "adiabatic_revival",
        Source::ExactRevival => "exact_revival",
        Source::ExactCrossing => "exact_crossing",
        Source::Jump => "jump",
        Source::InvertedConstant => "inverted_constant",
    }
}

fn fluctuations(a: &FluctuationsArgs) -> CliResult<String> {
    let sources = if a.source.is_empty() {
        vec![
            Source::AdiabaticRevival,
            Source::ExactRevival,
            Source::ExactCrossing,
            Source::Jump,
            Source::InvertedConstant,
        ]
    } else {
        a.source.clone()
    };
    if a.fock.is_empty() {
        return usage("--fock needs at least one value");
    }
    let power = sources.iter().any(|s| {
        matches!(
            s,
            Source::AdiabaticRevival | Source::ExactRevival | Source::ExactCrossing
        )
    });
    if power {
        crate::mode::PowerParams::new(a.n, a.omega_tau)
            .map_err(|e| CliFailure::Usage(e.to_string()))?;
        if !(a.t > 0.0 && a.t.is_finite()) {
            return usage(format!(
                "--t must be positive for the power-law sources, got {}",
                a.t
            ));
        }
    }
    finite_positive("rho", a.rho)?;
    finite_positive("kappa", a.kappa)?;

    let cases: Vec<(Source, u32)> = sources
        .iter()
        .flat_map(|&s| a.fock.iter().map(move |&n| (s, n)))
        .collect();
    let blocks = cases
        .par_iter()
        .map(|&(s, n)| -> Result<String> {
            let f = energy_variance_fock(&fluctuation_regime(a, s)?, n)?;
            let rel = f.mean.mul(&f.mean);
            let rel = if rel.mantissa == 0.0 {
                ScaledReal::plain(f64::NAN)
            } else {
                f.variance.div(&rel)
            };
            let mut block = String::new();
            for (q, v) in [
                ("mean", f.mean),
                ("second", f.second),
                ("variance", f.variance),
                ("relative_variance", rel),
            ] {
                if v.mantissa.is_nan() {
                    continue;
                }
                let (m, e) = folded(v);
                writeln!(block, "{},{n},{q},{},{}", source_name(s), num(m), num(e))
                    .expect("string write");
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = format!("# invosc fluctuations {a:?}\nsource,fock,quantity,mantissa,exponent\n");
    for b in blocks {
        out.push_str(&b);
    }
    Ok(out)
}

fn validate(a: &ValidateArgs) -> CliResult<(String, bool)> {
    let checks = run_checks()?;
    let mut out = format!(
        "# invosc validate {a:?}\nname,expected,observed,tolerance,status,criterion,comparison\n"
    );
    let mut all = true;
    for c in &checks {
        let ok = c.passed();
        all &= ok;
        let cmp = match c.comparison {
            Comparison::Absolute => "absolute",
            Comparison::Relative => "relative",
            Comparison::AtLeast => "at_least",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{cmp}",
            c.name,
            num(c.expected),
            num(c.observed),
            num(c.tolerance),
            if ok { "pass" } else { "fail" },
            c.criterion
        )
        .expect("string write");
    }
    Ok((out, all))
}

fn emit(text: &str, path: &Option<PathBuf>) -> CliResult<()> {
    let res = match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
        }
    };
    res.map_err(|e| CliFailure::Usage(format!("cannot write output: {e}")))
}

/// Run one parsed command and return the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a).and_then(|s| emit(&s, &a.output)).map(|_| true),
        Command::Ratio(a) => ratio(a).and_then(|s| emit(&s, &a.output)).map(|_| true),
        Command::Distribution(a) => distribution(a)
            .and_then(|s| emit(&s, &a.output))
            .map(|_| true),
        Command::Fluctuations(a) => fluctuations(a)
            .and_then(|s| emit(&s, &a.output))
            .map(|_| true),
        Command::Validate(a) => validate(a).and_then(|(s, ok)| emit(&s, &a.output).map(|_| ok)),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VALIDATION,
        Err(CliFailure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliFailure::Numerical(e)) => {
            eprintln!("error: {e}");
            EXIT_NUMERICAL
        }
    }
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
