//! Dormand–Prince 5(4) integration of the mode equation ε̈ + γ(t)ε = 0.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::mode::{gamma_of_t, FrequencyProfile};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Smallest step the controller may take before giving up.
pub const MIN_STEP: f64 = 1e-14;
/// Accepted range of the local error target.
pub const TOL_MIN: f64 = 1e-13;
pub const TOL_MAX: f64 = 1e-4;
/// State magnitude that triggers a log rescaling.
pub const RESCALE_AT: f64 = 1e100;

/// Settings for the embedded-pair integrator.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeOptions {
    /// Local error target (relative, with the same absolute floor).
    pub tol: f64,
    /// Times at which the state is reported; empty means every accepted step.
    pub sample_times: Vec<f64>,
    /// Stop and restart exactly at the profile's breakpoints.
    pub declare_breakpoints: bool,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            sample_times: Vec::new(),
            declare_breakpoints: true,
            max_steps: 5_000_000,
        }
    }

    pub fn with_samples(mut self, times: Vec<f64>) -> Self {
        self.sample_times = times;
        self
    }

    pub fn without_breakpoints(mut self) -> Self {
        self.declare_breakpoints = false;
        self
    }
}

/// Step statistics of one integration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Start times of the rejected steps.
    pub rejected_at: Vec<f64>,
    /// Largest accepted local error, in units of the tolerance.
    pub max_error_ratio: f64,
    /// Jumps of the right-hand side found after repeated rejections.
    pub detected_breakpoints: Vec<f64>,
}

/// One reported point of the integrated mode; true values carry `e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub t: f64,
    pub eps: Complex64,
    pub eps_dot: Complex64,
    pub log_scale: f64,
}

impl OracleSample {
    /// Mode values rescaled to a common exponent `target`.
    pub fn at_scale(&self, target: f64) -> (Complex64, Complex64) {
        let f = (self.log_scale - target).exp();
        (self.eps * f, self.eps_dot * f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationResult {
    pub samples: Vec<OracleSample>,
    /// max |W − 2i| / max(1, |ε||ε̇|) over accepted steps.
    pub wronskian_drift: f64,
    pub steps_taken: usize,
    pub stats: StepStats,
    /// Largest accepted local error estimate (absolute, in tolerance units times tol).
    pub tol_achieved: f64,
}

/// Integrate the mode from its initial conditions at t = −1 (or at `t0` for
/// the constant harmonic profile) over `[t0, t1]`.
pub fn integrate_mode(
    profile: &FrequencyProfile,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<IntegrationResult> {
    integrate_mode_with(profile, t0, t1, &OdeOptions::new(tol))
}

pub fn integrate_mode_with(
    profile: &FrequencyProfile,
    t0: f64,
    t1: f64,
    opts: &OdeOptions,
) -> Result<IntegrationResult> {
    profile.validate()?;
    check_tol(opts.tol)?;
    if matches!(profile, FrequencyProfile::ConstantInverted { .. }) {
        return Err(Error::Precondition(
            "the constant inverted profile has no initial harmonic stage".into(),
        ));
    }
    let start = profile.start_time().max(-1.0);
    if !(t0 >= start) || !(t1 > t0) {
        return domain(format!("need -1 <= t0 < t1, got [{t0}, {t1}]"));
    }
    let w0 = profile.omega0();
    let y0 = [w0.powf(-0.5), 0.0, 0.0, w0.sqrt()];
    let rhs = |t: f64, y: &[f64; 4]| {
        let g = gamma_of_t(profile, t);
        [y[2], y[3], -g * y[0], -g * y[1]]
    };
    let bps = if opts.declare_breakpoints {
        profile.breakpoints()
    } else {
        Vec::new()
    };

    // silent pre-run from the initial instant to t0
    let (mut y, mut ls) = (y0, 0.0);
    let mut pre_stats = StepStats::default();
    if t0 > start {
        let sol = solve(&rhs, y0, start, t0, &bps, &[], opts, |_, _, _, _| {})?;
        y = sol.0;
        ls = sol.1;
        pre_stats = sol.2;
    }

    let mut samples = Vec::new();
    let mut drift: f64 = 0.0;
    let sample_all = opts.sample_times.is_empty();
    let mut record = |t: f64, s: &[f64; 4], log_scale: f64, is_sample: bool| {
        let eps = Complex64::new(s[0], s[1]);
        let eps_dot = Complex64::new(s[2], s[3]);
        let w = 2.0 * (eps_dot * eps.conj()).im;
        let size = (eps.norm() * eps_dot.norm()).ln() + 2.0 * log_scale;
        let err = if size > 0.0 {
            (w - 2.0 * (-2.0 * log_scale).exp()).abs() / (eps.norm() * eps_dot.norm())
        } else {
            (w * (2.0 * log_scale).exp() - 2.0).abs()
        };
        drift = drift.max(err);
        if sample_all || is_sample {
            samples.push(OracleSample {
                t,
                eps,
                eps_dot,
                log_scale,
            });
        }
    };
    record(t0, &y, ls, opts.sample_times.first() == Some(&t0));
    let (_, _, stats) = solve_from(
        &rhs,
        y,
        ls,
        t0,
        t1,
        &bps,
        &opts.sample_times,
        opts,
        &mut record,
    )?;
    let total = StepStats {
        accepted: stats.accepted + pre_stats.accepted,
        rejected: stats.rejected + pre_stats.rejected,
        rejected_at: [pre_stats.rejected_at, stats.rejected_at].concat(),
        max_error_ratio: stats.max_error_ratio.max(pre_stats.max_error_ratio),
        detected_breakpoints: [pre_stats.detected_breakpoints, stats.detected_breakpoints].concat(),
    };
    Ok(IntegrationResult {
        samples,
        wronskian_drift: drift,
        steps_taken: total.accepted,
        tol_achieved: total.max_error_ratio * opts.tol,
        stats: total,
    })
}

/// Integrate the classical trajectory ẍ = −γ(t)x from (x0, p0) at t = −1.
/// Returns (t, x, p) at the requested times.
pub fn integrate_classical(
    profile: &FrequencyProfile,
    x0: f64,
    p0: f64,
    times: &[f64],
    tol: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    profile.validate()?;
    check_tol(tol)?;
    let start = profile.start_time().max(-1.0);
    let t1 = match times.last() {
        Some(&t) if t > start => t,
        _ => return domain("need at least one sample time after t = -1"),
    };
    let rhs = |t: f64, y: &[f64; 2]| [y[1], -gamma_of_t(profile, t) * y[0]];
    let opts = OdeOptions::new(tol);
    let mut out = Vec::with_capacity(times.len());
    if times[0] == start {
        out.push((start, x0, p0));
    }
    let mut rec = |t: f64, y: &[f64; 2], ls: f64, is_sample: bool| {
        if is_sample {
            let f = ls.exp();
            out.push((t, y[0] * f, y[1] * f));
        }
    };
    let bps = profile.breakpoints();
    solve_from(&rhs, [x0, p0], 0.0, start, t1, &bps, times, &opts, &mut rec)?;
    Ok(out)
}

fn check_tol(tol: f64) -> Result<()> {
    if (TOL_MIN..=TOL_MAX).contains(&tol) {
        Ok(())
    } else {
        domain(format!("tolerance {tol:e} outside [1e-13, 1e-4]"))
    }
}

type Solved<const D: usize> = ([f64; D], f64, StepStats);

#[allow(clippy::too_many_arguments)]
fn solve<const D: usize, F, R>(
    rhs: &F,
    y0: [f64; D],
    t0: f64,
    t1: f64,
    breakpoints: &[f64],
    samples: &[f64],
    opts: &OdeOptions,
    mut record: R,
) -> Result<Solved<D>>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    R: FnMut(f64, &[f64; D], f64, bool),
{
    solve_from(
        rhs,
        y0,
        0.0,
        t0,
        t1,
        breakpoints,
        samples,
        opts,
        &mut record,
    )
}

/// Core driver. `record` sees every accepted step; the flag marks requested samples.
#[allow(clippy::too_many_arguments)]
fn solve_from<const D: usize, F, R>(
    rhs: &F,
    y0: [f64; D],
    log_scale0: f64,
    t0: f64,
    t1: f64,
    breakpoints: &[f64],
    samples: &[f64],
    opts: &OdeOptions,
    record: &mut R,
) -> Result<Solved<D>>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    R: FnMut(f64, &[f64; D], f64, bool),
{
    // landing points: samples and breakpoints strictly inside (t0, t1], plus t1
    let mut stops: Vec<(f64, bool, bool)> = samples
        .iter()
        .filter(|&&s| s > t0 && s <= t1)
        .map(|&s| (s, true, false))
        .collect();
    for &b in breakpoints {
        if b > t0 && b < t1 {
            stops.push((b, false, true));
        }
    }
    stops.push((t1, false, false));
    stops.sort_by(|a, b| a.0.total_cmp(&b.0));
    // merge duplicates, keeping the flags
    let mut merged: Vec<(f64, bool, bool)> = Vec::with_capacity(stops.len());
    for s in stops {
        match merged.last_mut() {
            Some(last) if last.0 == s.0 => {
                last.1 |= s.1;
                last.2 |= s.2;
            }
            _ => merged.push(s),
        }
    }

    let mut y = y0;
    let mut log_scale = log_scale0;
    let mut t = t0;
    let mut stats = StepStats::default();
    let mut h = initial_step(rhs, t0, &y, t1 - t0, opts.tol);
    let mut fac_old: f64 = 1e-4;
    let mut seg_lo = t0;
    let mut lo_is_break = breakpoints.contains(&t0);

    let mut stops = merged;
    let mut idx = 0;
    let mut consecutive_rejects = 0usize;
    while idx < stops.len() {
        let (target, is_sample, is_break) = stops[idx];
        // γ is probed just inside the current segment so that stages landing on a
        // breakpoint see the value from the correct side
        let hi_is_break = is_break || breakpoints.contains(&target);
        let probe = |s: f64| -> f64 {
            if hi_is_break && s >= target {
                target - (target.abs() * f64::EPSILON).max(f64::MIN_POSITIVE)
            } else if lo_is_break && s <= seg_lo {
                seg_lo + (seg_lo.abs() * f64::EPSILON).max(f64::MIN_POSITIVE)
            } else {
                s
            }
        };
        let mut inserted = false;
        while t < target {
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(Error::Convergence {
                    what: "ODE integration",
                    detail: format!("step budget {} exhausted at t = {t}", opts.max_steps),
                });
            }
            let remaining = target - t;
            let landing = h >= remaining * (1.0 - 1e-12);
            let step = if landing { remaining } else { h };
            if step < MIN_STEP * t.abs().max(1.0) && !landing {
                return Err(Error::StepUnderflow { t, h: step });
            }
            let (y_new, err) = dp_step(rhs, &probe, t, &y, step, opts.tol);
            if err <= 1.0 {
                consecutive_rejects = 0;
                stats.accepted += 1;
                stats.max_error_ratio = stats.max_error_ratio.max(err);
                t = if landing { target } else { t + step };
                y = y_new;
                let big = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if big > RESCALE_AT {
                    for v in y.iter_mut() {
                        *v /= big;
                    }
                    log_scale += big.ln();
                }
                if !y.iter().all(|v| v.is_finite()) {
                    return Err(Error::Convergence {
                        what: "ODE integration",
                        detail: format!("non-finite state at t = {t}"),
                    });
                }
                record(t, &y, log_scale, landing && is_sample);
                let fac = controller_factor(err, fac_old);
                fac_old = err.max(1e-4);
                if !landing || step >= h {
                    h = step / fac;
                }
            } else {
                stats.rejected += 1;
                stats.rejected_at.push(t);
                consecutive_rejects += 1;
                let fac11 = err.powf(0.17);
                h = step / (fac11 / 0.9).min(5.0);
                // a run of rejections may signal an undeclared jump in the right-hand side
                if consecutive_rejects >= 3 {
                    if let Some(tb) = locate_jump(rhs, &y, t, t + step) {
                        if tb > t && tb < target {
                            stats.detected_breakpoints.push(tb);
                            stops.insert(idx, (tb, false, true));
                            consecutive_rejects = 0;
                            inserted = true;
                            break;
                        }
                    }
                }
            }
        }
        if inserted {
            continue;
        }
        seg_lo = target;
        lo_is_break = hi_is_break;
        idx += 1;
    }
    Ok((y, log_scale, stats))
}

/// Bisect `[a, b]` for a jump of the right-hand side at fixed state.
///
/// For a continuous right-hand side the difference across the bracket
/// shrinks with it; a jump keeps it finite down to one ulp.
fn locate_jump<const D: usize, F>(rhs: &F, y: &[f64; D], a: f64, b: f64) -> Option<f64>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let diff = |u: &[f64; D], v: &[f64; D]| {
        u.iter()
            .zip(v)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
    };
    let (mut lo, mut hi) = (a, b);
    let (mut f_lo, mut f_hi) = (rhs(lo, y), rhs(hi, y));
    let initial = diff(&f_lo, &f_hi);
    if !(initial > 0.0) {
        return None;
    }
    // run to adjacent floats so probes just inside the stop land on the correct side
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let f_mid = rhs(mid, y);
        if diff(&f_lo, &f_mid) >= diff(&f_mid, &f_hi) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    (diff(&f_lo, &f_hi) > 0.25 * initial).then_some(hi)
}

/// PI step-size factor (new step = h / factor).
fn controller_factor(err: f64, fac_old: f64) -> f64 {
    let fac11 = err.max(1e-10).powf(0.17);
    let fac = fac11 / fac_old.powf(0.04);
    (fac / 0.9).clamp(0.1, 5.0)
}

fn initial_step<const D: usize, F>(rhs: &F, t: f64, y: &[f64; D], span: f64, tol: f64) -> f64
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let f = rhs(t, y);
    let ny = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let nf = f.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    (0.01 * ny / nf * tol.powf(0.2)).min(0.1 * span)
}

fn dp_step<const D: usize, F, P>(
    rhs: &F,
    probe: &P,
    t: f64,
    y: &[f64; D],
    h: f64,
    tol: f64,
) -> ([f64; D], f64)
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    P: Fn(f64) -> f64,
{
    let mut k = [[0.0; D]; 7];
    for s in 0..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..D {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = rhs(probe(t + C[s] * h), &ys);
    }
    let mut y_new = *y;
    for (s, ks) in k.iter().enumerate().take(6) {
        for i in 0..D {
            y_new[i] += h * A[6][s] * ks[i];
        }
    }
    let mut acc = 0.0;
    for i in 0..D {
        let mut e = 0.0;
        for (s, ks) in k.iter().enumerate() {
            e += E[s] * ks[i];
        }
        let sc = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
        acc += (h * e / sc).powi(2);
    }
    (y_new, (acc / D as f64).sqrt())
}
