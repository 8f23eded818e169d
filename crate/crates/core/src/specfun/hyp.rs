//! Terminating Gauss hypergeometric polynomial F(-k, b; c; z).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported degree. Cancellation between terms grows with `k`.
pub const HYP_MAX_DEGREE: usize = 64;

/// Neumaier-compensated accumulator for one real component.
#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// The (k+1)-term sum `sum_j (-k)_j (b)_j / ((c)_j j!) z^j`.
pub fn hyp_terminating(k: usize, b: Complex64, c: f64, z: Complex64) -> Result<Complex64> {
    if k > HYP_MAX_DEGREE {
        return Err(Error::CapExceeded {
            k,
            cap: HYP_MAX_DEGREE,
        });
    }
    if c <= 0.0 && c == c.round() {
        return Err(Error::Domain(format!(
            "lower parameter c = {c} is a non-positive integer"
        )));
    }
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    let mut term = Complex64::new(1.0, 0.0);
    for j in 0..=k {
        re.add(term.re);
        im.add(term.im);
        let jf = j as f64;
        term = term * (jf - k as f64) * (b + jf) * z / ((c + jf) * (jf + 1.0));
    }
    Ok(Complex64::new(re.value(), im.value()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn low_degrees() {
        let b = c(0.3, -1.7);
        let z = c(0.4, 2.0);
        assert_eq!(hyp_terminating(0, b, 0.5, z).unwrap(), c(1.0, 0.0));
        let one = hyp_terminating(1, b, 1.5, z).unwrap();
        let want = 1.0 - b / 1.5 * z;
        assert!((one - want).norm() < 1e-15);
    }

    #[test]
    fn quartic_factor_at_origin() {
        // degree-2 factor with b = 1/4, c = 1/2 at z = 2
        let v = hyp_terminating(2, c(0.25, 0.0), 0.5, c(2.0, 0.0)).unwrap();
        // 1 - 2*(1/4)*2/(1/2) + (2*1)(1/4)(5/4)*4 / ((1/2)(3/2) 2) = 1 - 2 + 5/3
        assert!((v - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cap_and_poles() {
        assert_eq!(
            hyp_terminating(65, c(1.0, 0.0), 0.5, c(1.0, 0.0)),
            Err(Error::CapExceeded { k: 65, cap: 64 })
        );
        assert!(hyp_terminating(3, c(1.0, 0.0), -2.0, c(1.0, 0.0)).is_err());
        assert!(hyp_terminating(64, c(0.25, 3.0), 0.5, c(2.0, 0.0)).is_ok());
    }

    #[test]
    fn polynomial_coefficients_recovered() {
        // sample at k+1 roots of unity scaled by r and invert the DFT
        let k = 6;
        let b = c(0.25, -1.5);
        let cc = 0.5;
        let r = 0.7;
        let m = k + 1;
        let samples: Vec<Complex64> = (0..m)
            .map(|s| {
                let w = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * s as f64 / m as f64);
                hyp_terminating(k, b, cc, w).unwrap()
            })
            .collect();
        let mut coef = c(1.0, 0.0);
        for j in 0..=k {
            let mut acc = c(0.0, 0.0);
            for (s, v) in samples.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * (s * j) as f64 / m as f64;
                acc += v * Complex64::from_polar(1.0, ang);
            }
            let got = acc / (m as f64 * r.powi(j as i32));
            assert!(
                (got - coef).norm() < 1e-10 * coef.norm().max(1.0),
                "j={j}: {got} vs {coef}"
            );
            let jf = j as f64;
            coef = coef * (jf - k as f64) * (b + jf) / ((cc + jf) * (jf + 1.0));
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn rising(x: Complex64, k: usize) -> Complex64 {
        (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (x + j as f64))
    }

    proptest! {
        #![proptest_config(crate::prop_config(128))]

        // Chu–Vandermonde: F(−k, b; c; 1) = (c − b)_k / (c)_k
        #[test]
        fn unit_argument_sum(k in 0usize..14, br in 0.1f64..2.0, bi in -6.0f64..6.0, odd in any::<bool>()) {
            let c = if odd { 1.5 } else { 0.5 };
            let b = Complex64::new(br, bi);
            let got = hyp_terminating(k, b, c, Complex64::new(1.0, 0.0)).unwrap();
            let want = rising(Complex64::new(c, 0.0) - b, k) / rising(Complex64::new(c, 0.0), k);
            prop_assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "{got} vs {want}");
        }

        #[test]
        fn degree_zero_and_origin(k in 0usize..64, br in 0.1f64..2.0, bi in -6.0f64..6.0) {
            let b = Complex64::new(br, bi);
            prop_assert_eq!(hyp_terminating(k, b, 0.5, Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
            prop_assert_eq!(hyp_terminating(0, b, 0.5, Complex64::new(3.0, -1.0)).unwrap(), Complex64::new(1.0, 0.0));
        }
    }
}
