//! Lattice sum rule behind the Laughlin-lattice cancellation:
//!
//! ```text
//! sum_{z on lattice} G(z) f(z) exp(-|z|^2 / 4) = 0
//! ```
//!
//! for polynomials `f`, with `G(n1, n2) = (-1)^{n1 n2 + n1 + n2 + 1}` and
//! lattice spacing `b = sqrt(2 pi)`. Partial sums over `|z| < R` are
//! accumulated in double-double arithmetic: for each shell
//! `n1^2 + n2^2 = m` the signed Gaussian-integer moment
//! `sum G (n1 + i n2)^k` is exact in `i128`, and the shell weight
//! `exp(-pi m / 2)` is a double-double power.

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::lattice::spacing;

/// `exp(-pi/2)` as a double-double (hi, lo).
const DECAY_HI: f64 = 0.2078795763507619;
const DECAY_LO: f64 = 6.4431858349907894e-18;

pub const MAX_DEGREE: usize = 4;

/// Polynomial `sum_k a_k z^k` of degree at most [`MAX_DEGREE`].
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::InvalidArgument(format!(
                "polynomial degree {} exceeds {MAX_DEGREE}",
                coeffs.len() - 1
            )));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn monomial(k: usize) -> Result<Self> {
        let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }
}

/// Gaussian damping used in the lattice sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// `exp(-|z|^2 / 4)`, the weight under which the sum vanishes.
    Quarter,
    /// `exp(-|z|^2 / 2)`.
    Half,
}

/// Sign `G(n1, n2) = (-1)^{n1 n2 + n1 + n2 + 1}`.
pub fn gauge_sign(n1: i64, n2: i64) -> i64 {
    if (n1 * n2 + n1 + n2 + 1).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn gaussian_pow(re: i128, im: i128, k: usize) -> (i128, i128) {
    let (mut a, mut b) = (1i128, 0i128);
    for _ in 0..k {
        (a, b) = (a * re - b * im, a * im + b * re);
    }
    (a, b)
}

/// Complex double-double partial sum `sum_{|z| < R} G(z) z^k w(z)` for each
/// `k <= degree`, in units where `z = b (n1 + i n2)` is factored as `b^k`.
fn moments(radius: f64, degree: usize, measure: Measure) -> Vec<(TwoFloat, TwoFloat)> {
    let b = spacing();
    let r2 = (radius / b) * (radius / b);
    let nmax = r2.sqrt().ceil() as i64 + 1;
    let max_shell = (nmax * nmax) as usize * 2;
    // exact signed moments per shell
    let mut shells = vec![vec![(0i128, 0i128); degree + 1]; max_shell + 1];
    for n1 in -nmax..=nmax {
        for n2 in -nmax..=nmax {
            let m = n1 * n1 + n2 * n2;
            if (m as f64) >= r2 {
                continue;
            }
            let g = gauge_sign(n1, n2) as i128;
            for (k, slot) in shells[m as usize].iter_mut().enumerate() {
                let (a, c) = gaussian_pow(n1 as i128, n2 as i128, k);
                slot.0 += g * a;
                slot.1 += g * c;
            }
        }
    }
    let decay = TwoFloat::new_add(DECAY_HI, DECAY_LO);
    let step = match measure {
        Measure::Quarter => decay,
        Measure::Half => decay * decay,
    };
    let mut out = vec![(TwoFloat::from(0.0), TwoFloat::from(0.0)); degree + 1];
    let mut weight = TwoFloat::from(1.0);
    for shell in &shells {
        for (k, &(a, c)) in shell.iter().enumerate() {
            if a != 0 {
                out[k].0 += weight * TwoFloat::from(a as f64);
            }
            if c != 0 {
                out[k].1 += weight * TwoFloat::from(c as f64);
            }
        }
        weight *= step;
    }
    out
}

/// `|sum_{|z| < R} G(z) f(z) w(z)|` for the chosen measure.
pub fn residual_with(f: &Polynomial, radius: f64, measure: Measure) -> f64 {
    let degree = f.coeffs().len().saturating_sub(1);
    let m = moments(radius, degree, measure);
    let b = spacing();
    let mut total = Complex64::new(0.0, 0.0);
    for (k, (&a, &(re, im))) in f.coeffs().iter().zip(&m).enumerate() {
        let s = Complex64::new(f64::from(re), f64::from(im));
        total += a * b.powi(k as i32) * s;
    }
    total.norm()
}

/// Sum-rule residual with the `exp(-|z|^2 / 4)` weight.
pub fn residual(f: &Polynomial, radius: f64) -> f64 {
    residual_with(f, radius, Measure::Quarter)
}

/// Relative mismatch of the site identity
/// `exp(i b (x + y) / 2) exp(-y^2 / 2) = -G exp(z^2 / 4) exp(-|z|^2 / 4)`.
pub fn lattice_identity_mismatch(n1: i64, n2: i64) -> f64 {
    let b = spacing();
    let (x, y) = (n1 as f64 * b, n2 as f64 * b);
    let z = Complex64::new(x, y);
    let lhs = Complex64::new(-y * y / 2.0, b * (x + y) / 2.0).exp();
    let rhs = -(gauge_sign(n1, n2) as f64) * (z * z / 4.0 - z.norm_sqr() / 4.0).exp();
    (lhs - rhs).norm() / lhs.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_constant() {
        let c = f64::from(TwoFloat::new_add(DECAY_HI, DECAY_LO));
        assert!((c - (-std::f64::consts::FRAC_PI_2).exp()).abs() < 1e-16);
    }

    #[test]
    fn identity_holds_on_sites() {
        for n1 in -6..=6 {
            for n2 in -6..=6 {
                assert!(lattice_identity_mismatch(n1, n2) < 1e-9, "({n1},{n2})");
            }
        }
    }

    #[test]
    fn quarter_measure_vanishes() {
        let b = spacing();
        for k in 0..=MAX_DEGREE {
            let f = Polynomial::monomial(k).unwrap();
            let r5 = residual(&f, 5.0 * b);
            let r20 = residual(&f, 20.0 * b);
            assert!(r20 <= 1e-6 * r5 || (r5 == 0.0 && r20 == 0.0), "z^{k}: {r5} {r20}");
            assert!(r20 < 1e-25, "z^{k}: {r20}");
        }
    }

    #[test]
    fn half_measure_does_not_vanish() {
        let b = spacing();
        for k in [0, 4] {
            let f = Polynomial::monomial(k).unwrap();
            assert!(residual_with(&f, 20.0 * b, Measure::Half) > 0.1);
        }
    }

    #[test]
    fn brute_force_partial_sum() {
        // plain f64 sum over the disc for a generic polynomial
        let b = spacing();
        let f = Polynomial::new(vec![
            Complex64::new(0.3, -1.0),
            Complex64::new(2.0, 0.5),
            Complex64::new(0.0, 1.0),
        ])
        .unwrap();
        let radius = 2.5 * b;
        let mut s = Complex64::new(0.0, 0.0);
        for n1 in -4i64..=4 {
            for n2 in -4i64..=4 {
                let z = Complex64::new(n1 as f64 * b, n2 as f64 * b);
                if z.norm() < radius {
                    s += gauge_sign(n1, n2) as f64 * f.eval(z) * (-z.norm_sqr() / 4.0).exp();
                }
            }
        }
        let r = residual(&f, radius);
        assert!((r - s.norm()).abs() < 1e-12 * s.norm().max(1e-3), "{r} vs {}", s.norm());
    }

    #[test]
    fn degree_limit() {
        assert!(Polynomial::new(vec![Complex64::new(1.0, 0.0); 6]).is_err());
        assert!(Polynomial::monomial(4).is_ok());
    }
}
