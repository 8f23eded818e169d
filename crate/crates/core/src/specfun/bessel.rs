//! Real-argument Bessel kernels for orders in [-1, 1].
//!
//! Two regimes: an ascending series (double-double accumulation for `J`,
//! where alternating terms cancel) up to [`SERIES_LIMIT`], and the
//! large-argument Hankel expansions beyond it.

use std::f64::consts::PI;

use super::dd::Dd;
use super::gamma::{gamma, ln_gamma};
use crate::error::{domain, Error, Result};

/// Switch point between the ascending series and the asymptotic expansion.
pub const SERIES_LIMIT: f64 = 25.0;

const MAX_SERIES_TERMS: usize = 400;
const MAX_ASYMPTOTIC_TERMS: usize = 120;

fn check_args(order: f64, z: f64) -> Result<()> {
    if !order.is_finite() || !(-1.0..=1.0).contains(&order) {
        return domain(format!("Bessel order {order} outside [-1, 1]"));
    }
    if !z.is_finite() {
        return domain(format!("non-finite Bessel argument {z}"));
    }
    if z < 0.0 {
        return domain(format!("negative Bessel argument {z}"));
    }
    Ok(())
}

/// Value at the origin, shared by `J` and `I`.
fn at_origin(order: f64) -> Result<f64> {
    if order == 0.0 {
        Ok(1.0)
    } else if order > 0.0 || order == -1.0 {
        Ok(0.0)
    } else {
        domain(format!("order {order} is singular at z = 0"))
    }
}

/// Bessel function of the first kind `J_order(z)`.
pub fn bessel_j(order: f64, z: f64) -> Result<f64> {
    check_args(order, z)?;
    if z == 0.0 {
        return at_origin(order);
    }
    if order == -1.0 {
        return bessel_j(1.0, z).map(|v| -v);
    }
    if z <= SERIES_LIMIT {
        j_series(order, z)
    } else {
        j_hankel(order, z)
    }
}

fn j_series(p: f64, z: f64) -> Result<f64> {
    let half = 0.5 * z;
    let lead = half.powf(p) / gamma(p + 1.0)?;
    let q = Dd::prod(half, half);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 0..MAX_SERIES_TERMS {
        let kp1 = (k + 1) as f64;
        let denom = Dd::sum(kp1, p) * Dd::from_f64(kp1);
        term = -(term * q / denom);
        sum = sum + term;
        if kp1 > half && term.hi.abs() <= 1e-22 * sum.hi.abs().max(1e-300) {
            return Ok(lead * sum.to_f64());
        }
    }
    Err(Error::Convergence {
        what: "J power series",
        detail: format!("order {p}, z {z}"),
    })
}

/// Hankel coefficient ratio `a_{k+1}/a_k` for the large-argument expansions.
#[inline]
fn hankel_step(mu: f64, k: usize) -> f64 {
    let odd = (2 * k + 1) as f64;
    (mu - odd * odd) / (8.0 * (k + 1) as f64)
}

/// Asymptotic `P` and `Q` sums; stops at the smallest term.
fn hankel_pq(p: f64, z: f64) -> Result<(f64, f64)> {
    let mu = 4.0 * p * p;
    let mut a = 1.0; // a_k / z^k
    let mut pp = 1.0;
    let mut qq = 0.0;
    let mut last = f64::INFINITY;
    for k in 0..MAX_ASYMPTOTIC_TERMS {
        a *= hankel_step(mu, k) / z;
        let mag = a.abs();
        if mag >= last {
            break;
        }
        // k+1 odd goes to Q, even to P; signs alternate in pairs
        let idx = k + 1;
        let sign = if (idx / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if idx % 2 == 1 {
            qq += sign * a;
        } else {
            pp += sign * a;
        }
        if mag < 1e-17 {
            return Ok((pp, qq));
        }
        last = mag;
    }
    if last < 1e-11 {
        Ok((pp, qq))
    } else {
        Err(Error::Convergence {
            what: "Hankel expansion",
            detail: format!("order {p}, z {z}, smallest term {last:e}"),
        })
    }
}

fn j_hankel(p: f64, z: f64) -> Result<f64> {
    let (pp, qq) = hankel_pq(p, z)?;
    // chi = z - phase, expanded to keep the large argument out of the subtraction
    let phase = (0.5 * p + 0.25) * PI;
    let (sz, cz) = z.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cz * cp + sz * sp;
    let sin_chi = sz * cp - cz * sp;
    Ok((2.0 / (PI * z)).sqrt() * (pp * cos_chi - qq * sin_chi))
}

/// Exponentially scaled modified Bessel function `e^{-z} I_order(z)`.
///
/// Multiply by `e^z` (or carry `z` in a separate exponent) to recover
/// `I_order(z)`.
pub fn bessel_i_scaled(order: f64, z: f64) -> Result<f64> {
    check_args(order, z)?;
    if z == 0.0 {
        return at_origin(order);
    }
    let p = if order == -1.0 { 1.0 } else { order };
    if z <= SERIES_LIMIT {
        i_series_scaled(p, z)
    } else {
        i_asymptotic_scaled(p, z)
    }
}

fn i_series_scaled(p: f64, z: f64) -> Result<f64> {
    let half = 0.5 * z;
    let q = half * half;
    let lead = (p * half.ln() - z - ln_gamma(p + 1.0)?).exp();
    // all terms are positive for p > -1
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_SERIES_TERMS {
        let kp1 = (k + 1) as f64;
        term *= q / (kp1 * (kp1 + p));
        sum += term;
        if term <= 1e-17 * sum {
            return Ok(lead * sum);
        }
    }
    Err(Error::Convergence {
        what: "I power series",
        detail: format!("order {p}, z {z}"),
    })
}

fn i_asymptotic_scaled(p: f64, z: f64) -> Result<f64> {
    let sum = asymptotic_sum(p, z, -1.0)?;
    Ok(sum / (2.0 * PI * z).sqrt())
}

/// `sum_k sign^k a_k(p) / z^k`, truncated at the smallest term.
fn asymptotic_sum(p: f64, z: f64, sign: f64) -> Result<f64> {
    let mu = 4.0 * p * p;
    let mut a = 1.0;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..MAX_ASYMPTOTIC_TERMS {
        a *= sign * hankel_step(mu, k) / z;
        let mag = a.abs();
        if mag >= last {
            break;
        }
        sum += a;
        if mag < 1e-17 * sum.abs() {
            return Ok(sum);
        }
        last = mag;
    }
    if last < 1e-11 {
        Ok(sum)
    } else {
        Err(Error::Convergence {
            what: "modified Bessel asymptotic expansion",
            detail: format!("order {p}, z {z}"),
        })
    }
}

/// Exponentially scaled Macdonald function `e^{z} K_order(z)` for `z > 0`.
///
/// Used internally to split `I_{-p}` into `I_p` plus a decaying part, which
/// keeps growing/decaying combinations free of cancellation.
pub(crate) fn bessel_k_scaled(order: f64, z: f64) -> Result<f64> {
    check_args(order, z)?;
    if z == 0.0 {
        return domain("K is singular at z = 0");
    }
    let p = order.abs();
    if z > SERIES_LIMIT {
        let sum = asymptotic_sum(p, z, 1.0)?;
        return Ok(sum * (PI / (2.0 * z)).sqrt());
    }
    // e^z K_p(z) = int_0^inf exp(-z (cosh s - 1)) cosh(p s) ds; the integrand
    // decays double-exponentially so the trapezoid rule converges geometrically
    let h = 0.05;
    let mut sum = 0.5;
    let mut k = 1usize;
    loop {
        let s = k as f64 * h;
        let expo = -z * (s.cosh() - 1.0) + p * s;
        if expo < -46.0 && s > 1.0 {
            break;
        }
        sum += (-z * (s.cosh() - 1.0)).exp() * (p * s).cosh();
        k += 1;
        if k > 20_000 {
            return Err(Error::Convergence {
                what: "K trapezoid rule",
                detail: format!("order {p}, z {z}"),
            });
        }
    }
    Ok(sum * h)
}
