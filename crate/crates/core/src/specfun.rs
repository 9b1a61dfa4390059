//! Real-argument gamma kernels: signed log-gamma and rising factorials.

use std::f64::consts::{E, PI};

use crate::error::SpecFunError;

/// Distance below which an argument counts as a nonpositive integer.
pub const POLE_TOL: f64 = 1e-12;

// Lanczos approximation, g = 10.900511, 11 terms (Godfrey's coefficients).
const LANCZOS_G: f64 = 10.900511;
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_655_46e-5,
    1.051_423_785_817_219_742_10,
    -3.456_870_972_220_162_354_69,
    4.512_277_094_668_948_237_00,
    -2.982_852_253_235_766_557_21,
    1.056_397_115_771_267_130_77,
    -1.954_287_731_916_458_695_83e-1,
    1.709_705_434_044_412_243_07e-2,
    -5.719_261_174_043_057_812_83e-4,
    4.633_994_733_599_056_367_08e-6,
    -2.719_949_084_886_077_039_10e-9,
];
// ln(2 * sqrt(e / pi))
const LN_2_SQRT_E_OVER_PI: f64 =
    0.620_782_237_635_245_222_345_518_445_781_647_212_251_852_647_478_2;

/// `log|Γ(x)|` together with the sign of `Γ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogGamma {
    pub log_abs: f64,
    pub sign: i8,
}

impl SignedLogGamma {
    /// Reconstructs `Γ(x)`; overflows to infinity past `x ≈ 171`.
    pub fn value(&self) -> f64 {
        f64::from(self.sign) * self.log_abs.exp()
    }
}

/// True when `x` lies within [`POLE_TOL`] of `0, -1, -2, ...`.
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= POLE_TOL && (x - x.round()).abs() <= POLE_TOL
}

/// Signed log-gamma for real `x` off the poles of `Γ`.
///
/// Positive integers up to 171 are handled by an exact factorial product so
/// that `Γ(1) = Γ(2) = 1` come out as `log_abs == 0.0`. Other positive
/// arguments use a Lanczos sum; negative arguments go through the reflection
/// `Γ(x)Γ(1-x) = π / sin(πx)`.
pub fn log_gamma_signed(x: f64) -> Result<SignedLogGamma, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite(x));
    }
    if is_nonpositive_integer(x) {
        return Err(SpecFunError::Pole(x));
    }
    if x >= 0.5 {
        return Ok(SignedLogGamma {
            log_abs: ln_gamma_positive(x),
            sign: 1,
        });
    }
    // Reflection: log|Γ(x)| = ln π - ln|sin(πx)| - log Γ(1 - x).
    let s = sin_pi(x);
    let log_abs = PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x);
    Ok(SignedLogGamma {
        log_abs,
        sign: if s < 0.0 { -1 } else { 1 },
    })
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x.fract() == 0.0 && x <= 171.0 {
        // (x-1)! as an exact product while it stays representable
        let n = x as u32;
        let fact: f64 = (1..n).map(f64::from).product();
        return fact.ln();
    }
    let s = LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0));
    s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_G) / E).ln()
}

// sin(πx) with argument reduction so that values near integers keep their
// relative accuracy.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)` by direct product.
///
/// A nonpositive integer `a` with `|a| < n` yields an exact zero.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 0..n {
        let factor = a + f64::from(k);
        if factor == 0.0 {
            return 0.0;
        }
        acc *= factor;
    }
    acc
}

/// `Γ(x)` reconstructed from the signed log.
pub fn gamma(x: f64) -> Result<f64, SpecFunError> {
    log_gamma_signed(x).map(|g| g.value())
}
