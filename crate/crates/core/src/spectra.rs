//! Energy distribution of the inverted oscillator after a sudden jump.
//!
//! Energies are in units of κ (Ẽ = E/κ) and the initial oscillator has
//! ω₀ = 1, so ρ = κ. The initial Fock index n = 2k or 2k+1 selects the
//! lower gamma parameter a = 1/4 or 3/4.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::oracle::quad_adaptive_points;
use crate::specfun::{hyp_terminating, ln_gamma, log_gamma_complex, HYP_MAX_DEGREE};

/// Largest supported Fock index (the hypergeometric degree is ⌊n/2⌋).
pub const MAX_FOCK_INDEX: u32 = 2 * HYP_MAX_DEGREE as u32 + 1;

/// Absolute tolerance of the moment quadrature; the Ẽ- and Ẽ²-weighted
/// integrals use it times the largest weight on each segment.
pub const MOMENT_TOL: f64 = 1e-11;

/// Bound on the discarded tail mass of the moment integrals.
pub const TAIL_MASS: f64 = 1e-12;

/// Parameters of one density P_n(Ẽ; ρ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub n: u32,
    pub rho: f64,
    /// π/4 − arctan ρ.
    pub phi: f64,
    /// 4iρ/(1+iρ)².
    pub z: Complex64,
}

impl SpectralParams {
    pub fn new(n: u32, rho: f64) -> Result<Self> {
        if n > MAX_FOCK_INDEX {
            return Err(Error::CapExceeded {
                k: (n / 2) as usize,
                cap: HYP_MAX_DEGREE,
            });
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return domain(format!("rho must be positive and finite, got {rho}"));
        }
        let (phi, z) = if rho == 1.0 {
            (0.0, Complex64::new(2.0, 0.0))
        } else {
            let w = Complex64::new(1.0, rho);
            (
                PI / 4.0 - rho.atan(),
                Complex64::new(0.0, 4.0 * rho) / (w * w),
            )
        };
        Ok(Self { n, rho, phi, z })
    }

    /// Degree of the hypergeometric polynomial.
    pub fn k(&self) -> u32 {
        self.n / 2
    }

    /// 1/4 for even n, 3/4 for odd n.
    pub fn gamma_offset(&self) -> f64 {
        if self.n.is_multiple_of(2) {
            0.25
        } else {
            0.75
        }
    }

    fn lower_c(&self) -> f64 {
        if self.n.is_multiple_of(2) {
            0.5
        } else {
            1.5
        }
    }

    /// Mean and second moment of Ẽ implied by the jump energetics.
    pub fn expected_moments(&self) -> (f64, f64) {
        let n = self.n as f64;
        let m = n * n + n;
        let r2 = self.rho * self.rho;
        let mean = (2.0 * n + 1.0) * (1.0 - r2) / (4.0 * self.rho);
        let second =
            (3.0 * (2.0 * m + 1.0) * (1.0 + r2 * r2) - 2.0 * r2 * (2.0 * m - 1.0)) / (16.0 * r2);
        (mean, second)
    }
}

/// Density evaluator with the Ẽ-independent prefactor cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    pub params: SpectralParams,
    ln_prefactor: f64,
}

impl SpectralDensity {
    pub fn new(params: SpectralParams) -> Result<Self> {
        let k = params.k() as f64;
        let rho = params.rho;
        let ln_k_fact = ln_gamma(k + 1.0)?;
        let ln_prefactor = if params.n.is_multiple_of(2) {
            ln_gamma(k + 0.5)? + 0.5 * rho.ln()
                - (2.0 * PI * PI).ln()
                - ln_k_fact
                - 0.5 * (1.0 + rho * rho).ln()
        } else {
            8f64.ln() + ln_gamma(k + 1.5)? + 1.5 * rho.ln()
                - (PI * PI).ln()
                - ln_k_fact
                - 1.5 * (1.0 + rho * rho).ln()
        };
        Ok(Self {
            params,
            ln_prefactor,
        })
    }

    /// Complex polynomial factor F(−k, a − iẼ/2; c; z).
    pub fn polynomial(&self, e: f64) -> Result<Complex64> {
        let p = &self.params;
        let b = Complex64::new(p.gamma_offset(), -0.5 * e);
        hyp_terminating(p.k() as usize, b, p.lower_c(), p.z)
    }

    /// ln P; `-inf` at exact zeros.
    pub fn ln_value(&self, e: f64) -> Result<f64> {
        if !e.is_finite() {
            return domain(format!("energy must be finite, got {e}"));
        }
        let p = &self.params;
        let lg = log_gamma_complex(Complex64::new(p.gamma_offset(), -0.5 * e))?;
        let f = self.polynomial(e)?;
        Ok(self.ln_prefactor + 2.0 * e * p.phi + 2.0 * lg.re + 2.0 * f.norm().ln())
    }

    pub fn value(&self, e: f64) -> Result<f64> {
        Ok(self.ln_value(e)?.exp())
    }
}

/// P_n(Ẽ; ρ) from the general expressions.
pub fn density(params: &SpectralParams, e: f64) -> Result<f64> {
    SpectralDensity::new(*params)?.value(e)
}

/// The simplified ρ = 1 forms, with z = 2 and no exponential factor.
pub fn density_rho1(n: u32, e: f64) -> Result<f64> {
    let p = SpectralParams::new(n, 1.0)?;
    let k = p.k() as f64;
    let ln_k_fact = ln_gamma(k + 1.0)?;
    let ln_pre = if n.is_multiple_of(2) {
        ln_gamma(k + 0.5)? - 1.5 * 2f64.ln() - 2.0 * PI.ln() - ln_k_fact
    } else {
        1.5 * 2f64.ln() + ln_gamma(k + 1.5)? - 2.0 * PI.ln() - ln_k_fact
    };
    let b = Complex64::new(p.gamma_offset(), -0.5 * e);
    let lg = log_gamma_complex(b)?;
    let f = hyp_terminating(p.k() as usize, b, p.lower_c(), Complex64::new(2.0, 0.0))?;
    Ok((ln_pre + 2.0 * lg.re + 2.0 * f.norm().ln()).exp())
}

/// |P_n(Ẽ; ρ) − P_n(−Ẽ; 1/ρ)|.
pub fn reciprocity_check(n: u32, rho: f64, e: f64) -> Result<f64> {
    let a = density(&SpectralParams::new(n, rho)?, e)?;
    let b = density(&SpectralParams::new(n, 1.0 / rho)?, -e)?;
    Ok((a - b).abs())
}

/// ∫P, ∫ẼP, ∫Ẽ²P and the summed quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMoments {
    pub norm: f64,
    pub mean: f64,
    pub second: f64,
    pub error: f64,
    /// Integration window [lo, hi].
    pub window: (f64, f64),
}

/// Push the window edge outward until the tail beyond it is negligible.
///
/// The tail decays like |Ẽ|^m e^{−λ|Ẽ|} with λ = π/2 ∓ 2Φ; past the point
/// where the power stops growing, Ẽ²P(Ẽ)·2/λ bounds the rest.
fn window_edge(d: &SpectralDensity, sign: f64) -> Result<f64> {
    let p = &d.params;
    let rate = PI / 2.0 - sign * 2.0 * p.phi;
    let power = 2.0 * p.gamma_offset() - 1.0 + 2.0 * p.k() as f64 + 2.0;
    let mut w = p.n as f64 + 40.0;
    loop {
        let past_peak = w * rate > 2.0 * power;
        let tail = w * w * d.value(sign * w)? * 2.0 / rate;
        if past_peak && tail < TAIL_MASS {
            return Ok(w);
        }
        w += 10.0;
        if w > 5000.0 {
            return Err(Error::Convergence {
                what: "density tail",
                detail: format!("tail still {tail:e} at |Ẽ| = {w}"),
            });
        }
    }
}

/// Moments of P_n by adaptive quadrature over a window adapted to the tails.
///
/// The window is cut into segments about two units wide, integrated in parallel; the
/// per-segment results are summed in order, so the outcome is deterministic.
pub fn density_moments(params: &SpectralParams) -> Result<DensityMoments> {
    let d = SpectralDensity::new(*params)?;
    let lo = -window_edge(&d, -1.0)?;
    let hi = window_edge(&d, 1.0)?;
    let pieces = ((hi - lo) / 2.0).ceil() as usize;
    let step = (hi - lo) / pieces as f64;
    let tol = MOMENT_TOL / pieces as f64;
    let parts: Vec<Result<[f64; 4]>> = (0..pieces)
        .into_par_iter()
        .map(|i| {
            let a = lo + step * i as f64;
            let b = if i + 1 == pieces { hi } else { a + step };
            let mut out = [0.0; 4];
            let reach = a.abs().max(b.abs()).max(1.0);
            for (j, power) in [0, 1, 2].into_iter().enumerate() {
                let f = |e: f64| d.value(e).unwrap_or(f64::NAN) * e.powi(power);
                // weighted moments are judged relative to the size of the weight
                let seg_tol = tol * reach.powi(power);
                let (v, err) =
                    quad_adaptive_points(f, &[a, b], seg_tol, crate::oracle::PANEL_BUDGET)?;
                out[j] = v;
                out[3] += err;
            }
            Ok(out)
        })
        .collect();
    let mut sum = [0.0; 4];
    for part in parts {
        let part = part?;
        for j in 0..4 {
            sum[j] += part[j];
        }
    }
    Ok(DensityMoments {
        norm: sum[0],
        mean: sum[1],
        second: sum[2],
        error: sum[3],
        window: (lo, hi),
    })
}

/// Zeros, outermost peak and tail decay of one density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureReport {
    /// Sign changes of the polynomial factor on Ẽ > 0 (meaningful at ρ = 1).
    pub zero_count: usize,
    /// Zero locations found, up to the first eight.
    pub zeros: [f64; 8],
    pub last_max_location: f64,
    /// Slope of ln P − m ln Ẽ over [n+5, n+20], where m = 2a − 1 + 2k is the
    /// power carried by the gamma and polynomial factors.
    pub tail_slope: f64,
    /// Plain least-squares slope of ln P over the same range.
    pub raw_tail_slope: f64,
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Zero count, last maximum and tail slope.
///
/// At ρ = 1 the factor (−i)^k F is real on the real axis, so zeros are
/// sign changes on a grid of 40(k+1) points, each refined by bisection.
pub fn structure_report(params: &SpectralParams) -> Result<StructureReport> {
    let d = SpectralDensity::new(*params)?;
    let k = params.k();
    let n = params.n as f64;
    let rot = Complex64::new(0.0, -1.0).powu(k);
    let real_part = |e: f64| -> Result<f64> { Ok((rot * d.polynomial(e)?).re) };

    let span = n + 5.0;
    let grid = 40 * (k as usize + 1);
    let mut zeros = Vec::new();
    let mut prev_e = span / grid as f64 * 1e-3;
    let mut prev = real_part(prev_e)?;
    for i in 1..=grid {
        let e = span * i as f64 / grid as f64;
        let cur = real_part(e)?;
        if prev != 0.0 && cur != 0.0 && prev.signum() != cur.signum() {
            let (mut a, mut b, fa) = (prev_e, e, prev);
            while b - a > 1e-8 {
                let m = 0.5 * (a + b);
                if real_part(m)?.signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        prev_e = e;
        prev = cur;
    }

    // outermost peak: grid search past the last zero, then golden section
    let start = zeros.last().copied().unwrap_or(0.0);
    let samples = 400;
    let mut best = (start, f64::NEG_INFINITY);
    for i in 0..=samples {
        let e = start + (span + 5.0 - start) * i as f64 / samples as f64;
        let v = d.ln_value(e)?;
        if v > best.1 {
            best = (e, v);
        }
    }
    let h = (span + 5.0 - start) / samples as f64;
    let (mut a, mut b) = ((best.0 - h).max(start), best.0 + h);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    while b - a > 1e-9 {
        let c = b - ratio * (b - a);
        let dd = a + ratio * (b - a);
        if d.ln_value(c)? > d.ln_value(dd)? {
            b = dd;
        } else {
            a = c;
        }
    }
    let last_max_location = 0.5 * (a + b);

    let power = 2.0 * params.gamma_offset() - 1.0 + 2.0 * k as f64;
    let xs: Vec<f64> = (0..=60).map(|i| n + 5.0 + 15.0 * i as f64 / 60.0).collect();
    let raw: Vec<f64> = xs.iter().map(|&e| d.ln_value(e)).collect::<Result<_>>()?;
    let adjusted: Vec<f64> = xs
        .iter()
        .zip(&raw)
        .map(|(e, l)| l - power * e.ln())
        .collect();

    let mut zero_arr = [f64::NAN; 8];
    for (slot, z) in zero_arr.iter_mut().zip(&zeros) {
        *slot = *z;
    }
    Ok(StructureReport {
        zero_count: zeros.len(),
        zeros: zero_arr,
        last_max_location,
        tail_slope: least_squares_slope(&xs, &adjusted),
        raw_tail_slope: least_squares_slope(&xs, &raw),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;

    #[test]
    fn params_at_unit_ratio() {
        let p = SpectralParams::new(3, 1.0).unwrap();
        assert_eq!(p.phi, 0.0);
        assert_eq!(p.z, Complex64::new(2.0, 0.0));
        let g = SpectralParams::new(3, 1.0 + 1e-12).unwrap();
        assert!((g.z - p.z).norm() < 1e-11 && g.phi.abs() < 1e-11);
        for rho in [0.3, 2.0, 7.0] {
            let a = SpectralParams::new(0, rho).unwrap();
            let b = SpectralParams::new(0, 1.0 / rho).unwrap();
            assert!((a.phi + b.phi).abs() < 1e-15);
            assert!((a.z - b.z.conj()).norm() < 1e-15);
        }
        assert!(matches!(
            SpectralParams::new(130, 1.0),
            Err(Error::CapExceeded { .. })
        ));
        assert!(SpectralParams::new(2, -1.0).is_err());
    }

    #[test]
    fn low_order_closed_forms() {
        let g14 = gamma(0.25).unwrap();
        let p0 = density(&SpectralParams::new(0, 1.0).unwrap(), 0.0).unwrap();
        assert!((p0 - (2.0 * PI).powf(-1.5) * g14 * g14).abs() < 1e-13);
        assert!((p0 - 0.834_626_841_674_073).abs() < 1e-6);
        assert!(density(&SpectralParams::new(2, 1.0).unwrap(), 0.0).unwrap() < 1e-300);
        let p4 = density(&SpectralParams::new(4, 1.0).unwrap(), 0.5f64.sqrt()).unwrap();
        assert!(p4 < 1e-25);
        let gabs = |a: f64, e: f64| crate::specfun::gamma_abs_sq(a, 0.5 * e).unwrap();
        for e in [0.3, 1.7, 4.0] {
            let want2 = (2.0 * PI.powi(3)).powf(-0.5) * e * e * gabs(0.25, e);
            let want3 = (2.0 / PI).powf(1.5) * e * e / 3.0 * gabs(0.75, e);
            let want4 = (1.0 - 2.0 * e * e).powi(2) / (6.0 * (2.0 * PI).powf(1.5)) * gabs(0.25, e);
            let want5 = 6.0 / (5.0 * (2.0 * PI).powf(1.5))
                * (1.0 - 2.0 / 3.0 * e * e).powi(2)
                * gabs(0.75, e);
            for (n, want) in [(2, want2), (3, want3), (4, want4), (5, want5)] {
                let got = density(&SpectralParams::new(n, 1.0).unwrap(), e).unwrap();
                assert!(
                    (got - want).abs() <= 1e-12 * want,
                    "n {n} e {e}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn unit_ratio_fast_path_agrees() {
        for n in 0..16 {
            let p = SpectralParams::new(n, 1.0).unwrap();
            for e in [-3.1, 0.2, 2.5, 9.0] {
                let a = density(&p, e).unwrap();
                let b = density_rho1(n, e).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.max(1e-300), "n {n} e {e}");
            }
        }
    }

    #[test]
    fn even_at_unit_ratio() {
        let p = SpectralParams::new(0, 1.0).unwrap();
        for e in [0.7, 2.3] {
            assert!((density(&p, e).unwrap() - density(&p, -e).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn reciprocity_examples() {
        let a = density(&SpectralParams::new(8, 2.0).unwrap(), 3.0).unwrap();
        assert!(reciprocity_check(8, 2.0, 3.0).unwrap() <= 1e-10 * a);
        let b = density(&SpectralParams::new(10, 0.5).unwrap(), -5.0).unwrap();
        assert!(reciprocity_check(10, 0.5, -5.0).unwrap() <= 1e-10 * b);
        assert!(reciprocity_check(6, 1.0, 1.3).unwrap() <= 1e-12);
    }

    #[test]
    fn low_order_moments() {
        let m0 = density_moments(&SpectralParams::new(0, 1.0).unwrap()).unwrap();
        assert!((m0.norm - 1.0).abs() < 1e-9);
        assert!(m0.mean.abs() < 1e-9);
        assert!((m0.second - 0.5).abs() < 1e-9);
        let m1 = density_moments(&SpectralParams::new(1, 1.0).unwrap()).unwrap();
        assert!((m1.norm - 1.0).abs() < 1e-9 && (m1.second - 1.5).abs() < 1e-9);
        let p = SpectralParams::new(8, 2.0).unwrap();
        let m = density_moments(&p).unwrap();
        assert!((p.expected_moments().0 + 6.375).abs() < 1e-14);
        assert!((m.mean + 6.375).abs() < 1e-6 * 6.375);
        assert!(m.window.0 < -48.0);
    }

    #[test]
    fn structure_of_p8() {
        let r = structure_report(&SpectralParams::new(8, 1.0).unwrap()).unwrap();
        assert_eq!(r.zero_count, 2);
        assert!(r.last_max_location < 8.0 && r.last_max_location > 5.0);
        assert_eq!(
            structure_report(&SpectralParams::new(0, 1.0).unwrap())
                .unwrap()
                .zero_count,
            0
        );
        let r6 = structure_report(&SpectralParams::new(6, 1.0).unwrap()).unwrap();
        assert!(
            (r6.tail_slope / (-PI / 2.0) - 1.0).abs() < 0.03,
            "{}",
            r6.tail_slope
        );
    }
}
