//! The odd Jacobi theta function `theta_1(z | tau)` for purely imaginary `tau`,
//! evaluated in log form.
//!
//! Evaluation first folds `z` into the fundamental cell using
//! `theta_1(z + pi) = -theta_1(z)` and
//! `theta_1(z + pi tau) = -q^{-1} e^{-2iz} theta_1(z)` with `q = e^{i pi tau}`,
//! so the exponentially large quasi-periodic factors are carried exactly in
//! the logarithm. For `Im tau < 1` the folded argument is mapped through the
//! imaginary modular transformation, which keeps the nome at or below
//! `e^{-pi}` and avoids cancellation in the series.

use std::f64::consts::{LN_2, PI};
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative size below which the next series term is dropped.
const SERIES_TOL: f64 = 1e-16;
const MAX_TERMS: usize = 64;

/// Complex number stored as `(ln |a|, arg a)`; `log_mag = -inf` is an exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogAmplitude {
    pub log_mag: f64,
    pub phase: f64,
}

/// Reduce an angle into `(-pi, pi]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let mut p = phase.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

impl LogAmplitude {
    pub const ZERO: LogAmplitude = LogAmplitude {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub const ONE: LogAmplitude = LogAmplitude {
        log_mag: 0.0,
        phase: 0.0,
    };

    /// From a complex logarithm whose imaginary part need not be reduced.
    pub fn from_ln(ln: Complex64) -> Self {
        if ln.re == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogAmplitude {
            log_mag: ln.re,
            phase: wrap_phase(ln.im),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        LogAmplitude {
            log_mag: z.norm().ln(),
            phase: z.arg(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.log_mag, self.phase)
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    pub fn conj(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        LogAmplitude {
            log_mag: self.log_mag,
            phase: wrap_phase(-self.phase),
        }
    }
}

impl Mul for LogAmplitude {
    type Output = LogAmplitude;

    fn mul(self, rhs: LogAmplitude) -> LogAmplitude {
        if self.is_zero() || rhs.is_zero() {
            return LogAmplitude::ZERO;
        }
        LogAmplitude {
            log_mag: self.log_mag + rhs.log_mag,
            phase: wrap_phase(self.phase + rhs.phase),
        }
    }
}

/// `theta_1(z | i tau_im)` as a [`LogAmplitude`].
pub fn log_theta1(z: Complex64, tau_im: f64) -> Result<LogAmplitude> {
    check_tau(tau_im)?;
    Ok(LogAmplitude::from_ln(ln_theta1(z, tau_im)))
}

/// `theta_1(z | i tau_im)^2` as a [`LogAmplitude`].
pub fn log_theta1_sq(z: Complex64, tau_im: f64) -> Result<LogAmplitude> {
    check_tau(tau_im)?;
    Ok(LogAmplitude::from_ln(2.0 * ln_theta1(z, tau_im)))
}

fn check_tau(tau_im: f64) -> Result<()> {
    if tau_im > 0.0 && tau_im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTau(tau_im))
    }
}

/// Unreduced complex logarithm of `theta_1(z | i tau_im)`. The imaginary
/// part is a continuous-enough branch for products; callers wrap it when
/// needed. Zeros of theta_1 give a real part of `-inf`.
pub(crate) fn ln_theta1(z: Complex64, tau_im: f64) -> Complex64 {
    ln_theta1_counted(z, tau_im).0
}

/// Folds `z` into `|Re z| <= pi/2`, `|Im z| <= pi tau_im / 2`. Returns the
/// folded argument and the log of the factor `theta_1(z) / theta_1(folded)`.
pub(crate) fn fold_into_cell(z: Complex64, tau_im: f64) -> (Complex64, Complex64) {
    let k1 = (z.re / PI).round();
    let k2 = (z.im / (PI * tau_im)).round();
    let folded = Complex64::new(z.re - k1 * PI, z.im - k2 * PI * tau_im);
    // theta_1(w + k1 pi + k2 pi tau) = (-1)^{k1 + k2} q^{-k2^2} e^{-2 i k2 w} theta_1(w)
    let factor = Complex64::new(k2 * k2 * PI * tau_im, (k1 + k2) * PI) - Complex64::new(0.0, 2.0 * k2) * folded;
    (folded, factor)
}

pub(crate) fn ln_theta1_counted(z: Complex64, tau_im: f64) -> (Complex64, usize) {
    debug_assert!(tau_im > 0.0);
    let (w, factor) = fold_into_cell(z, tau_im);
    let scale = 1.0 + z.norm();
    if w.norm() <= 32.0 * f64::EPSILON * scale {
        return (Complex64::new(f64::NEG_INFINITY, 0.0), 0);
    }
    if tau_im >= 1.0 {
        let (s, n) = ln_series(w, tau_im);
        (factor + s, n)
    } else {
        // theta_1(w | it) = i t^{-1/2} e^{-w^2/(pi t)} theta_1(-i w / t | i / t)
        let dual = Complex64::new(w.im / tau_im, -w.re / tau_im);
        let (s, n) = ln_series(dual, 1.0 / tau_im);
        let pre = Complex64::new(-0.5 * tau_im.ln(), PI / 2.0) - w * w / (PI * tau_im);
        (factor + pre + s, n)
    }
}

/// `ln theta_1(w | i t)` by its Fourier series, for `t >= 1` and `w` in the
/// fundamental cell. Returns the value and the number of terms used.
fn ln_series(w: Complex64, t: f64) -> (Complex64, usize) {
    // theta_1 = 2 e^{-pi t/4} sum_n (-1)^n e^{-pi t n(n+1)} sin((2n+1) w)
    let mut sum = w.sin();
    let mut terms = 1;
    for n in 1..MAX_TERMS {
        let nf = n as f64;
        let weight = (-PI * t * nf * (nf + 1.0)).exp();
        let mut term = ((2.0 * nf + 1.0) * w).sin() * weight;
        if n % 2 == 1 {
            term = -term;
        }
        sum += term;
        terms += 1;
        if term.norm() < SERIES_TOL * sum.norm() || weight == 0.0 {
            break;
        }
    }
    (Complex64::new(LN_2 - PI * t / 4.0, 0.0) + sum.ln(), terms)
}
