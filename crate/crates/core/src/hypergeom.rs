//! The Gauss hypergeometric series `F(u,v;w;z)` inside the unit disk, its
//! normalized form `z·F`, derivatives by parameter shift, and identity
//! residuals used as numerical oracles.
//!
//! Truncation is controlled by a ratio envelope: for indices `k ≥ N > |w|`
//! the term ratio `|z|·|(u+k)(v+k)| / |(w+k)(k+1)|` never exceeds
//!
//! ```text
//! q_N = |z| · max(1, (N+m)/(N+1)) · (N+m)/(N-|w|),   m = max(|u|, |v|)
//! ```
//!
//! so once `q_N < 1` the remainder is at most `|t_N| / (1 - q_N)`.

use num_complex::Complex64;

use crate::error::HypergeomError;
use crate::specfun::is_nonpositive_integer;

pub type Complex = Complex64;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 10_000;
pub const DEFAULT_R_MAX: f64 = 0.99;
pub const MIN_TOL: f64 = 1e-14;

/// Real parameter triple `(u, v, w)` of `F(u,v;w;·)` with `w` off the poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeomParams {
    u: f64,
    v: f64,
    w: f64,
}

impl HypergeomParams {
    pub fn new(u: f64, v: f64, w: f64) -> Result<Self, HypergeomError> {
        if !(u.is_finite() && v.is_finite() && w.is_finite()) {
            return Err(HypergeomError::NonFiniteParam);
        }
        if is_nonpositive_integer(w) {
            return Err(HypergeomError::ParamPole(w));
        }
        Ok(Self { u, v, w })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// `(u+k, v+k, w+k)`, validated again.
    pub fn shifted(&self, k: f64) -> Result<Self, HypergeomError> {
        Self::new(self.u + k, self.v + k, self.w + k)
    }

    /// `(v, u, w)`
    pub fn swapped(&self) -> Self {
        Self {
            u: self.v,
            v: self.u,
            w: self.w,
        }
    }
}

/// Knobs shared by every series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub tol: f64,
    pub max_terms: usize,
    pub r_max: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_terms: DEFAULT_MAX_TERMS,
            r_max: DEFAULT_R_MAX,
        }
    }
}

impl SeriesOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// A truncated series value.
///
/// `tail_bound` bounds the discarded remainder only; `abs_sum` (the sum of
/// term moduli) sizes the floating-point summation error separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex,
    pub tail_bound: f64,
    pub terms_used: usize,
    pub abs_sum: f64,
}

impl SeriesValue {
    fn exact(value: Complex) -> Self {
        Self {
            value,
            tail_bound: 0.0,
            terms_used: 1,
            abs_sum: value.norm(),
        }
    }

    fn scaled(self, c: f64) -> Self {
        Self {
            value: self.value * c,
            tail_bound: self.tail_bound * c.abs(),
            terms_used: self.terms_used,
            abs_sum: self.abs_sum * c.abs(),
        }
    }

    /// Truncation bound plus a summation rounding estimate.
    pub fn error_estimate(&self) -> f64 {
        self.tail_bound + 4.0 * f64::EPSILON * (self.terms_used as f64).sqrt() * self.abs_sum
    }
}

fn check_call(z: Complex, opts: &SeriesOptions) -> Result<(), HypergeomError> {
    if !(opts.tol >= MIN_TOL && opts.tol < 1.0) {
        return Err(HypergeomError::InvalidTolerance(opts.tol));
    }
    let abs_z = z.norm();
    // a few ulps of slack so polar grid points on r_max are accepted
    if !(abs_z <= opts.r_max * (1.0 + 4.0 * f64::EPSILON)) {
        return Err(HypergeomError::Domain {
            abs_z,
            r_max: opts.r_max,
        });
    }
    Ok(())
}

// Upper bound on every term ratio with index >= n (requires n > |w|).
fn ratio_envelope(p: &HypergeomParams, abs_z: f64, n: f64) -> Option<f64> {
    // symmetric in u and v so that F(u,v) and F(v,u) truncate identically
    let m = p.u.abs().max(p.v.abs());
    let aw = p.w.abs();
    if n <= aw {
        return None;
    }
    let first = ((n + m) / (n + 1.0)).max(1.0);
    let second = (n + m) / (n - aw);
    Some(abs_z * first * second)
}

/// `F(u,v;w;z) = Σ (u)_n (v)_n / (w)_n · z^n / n!` for `|z| <= r_max`.
///
/// On success `|value - F| <= tail_bound <= tol · max(1, |value|)`.
pub fn gauss_2f1(
    p: &HypergeomParams,
    z: Complex,
    opts: &SeriesOptions,
) -> Result<SeriesValue, HypergeomError> {
    check_call(z, opts)?;
    if z == Complex::new(0.0, 0.0) {
        return Ok(SeriesValue::exact(Complex::new(1.0, 0.0)));
    }
    weighted_sum(p, z, 0.0, false, opts)
}

/// `F'(z)` by term-wise differentiation, `Σ n c_n z^{n-1}`.
///
/// Independent of the parameter-shift route used by [`gauss_2f1_deriv`].
pub fn termwise_derivative(
    p: &HypergeomParams,
    z: Complex,
    opts: &SeriesOptions,
) -> Result<SeriesValue, HypergeomError> {
    check_call(z, opts)?;
    if z == Complex::new(0.0, 0.0) {
        return Ok(SeriesValue::exact(Complex::new(p.u * p.v / p.w, 0.0)));
    }
    let s = weighted_sum(p, z, 0.0, true, opts)?;
    let inv = 1.0 / z;
    Ok(SeriesValue {
        value: s.value * inv,
        tail_bound: s.tail_bound * inv.norm(),
        terms_used: s.terms_used,
        abs_sum: s.abs_sum * inv.norm(),
    })
}

/// `𝔽'(z) = Σ (n+1) c_n z^n` summed directly.
pub fn normalized_derivative_direct(
    p: &HypergeomParams,
    z: Complex,
    opts: &SeriesOptions,
) -> Result<SeriesValue, HypergeomError> {
    check_call(z, opts)?;
    if z == Complex::new(0.0, 0.0) {
        return Ok(SeriesValue::exact(Complex::new(1.0, 0.0)));
    }
    weighted_sum(p, z, 1.0, true, opts)
}

// Σ (n + offset)^[weighted] c_n z^n with the ratio-envelope stopping rule.
// The weight ratio (n+1+offset)/(n+offset) is decreasing in n, so its value
// at the envelope index bounds all later ones.
fn weighted_sum(
    p: &HypergeomParams,
    z: Complex,
    offset: f64,
    weighted: bool,
    opts: &SeriesOptions,
) -> Result<SeriesValue, HypergeomError> {
    let abs_z = z.norm();
    let weight = |n: f64| if weighted { n + offset } else { 1.0 };
    let mut coef = Complex::new(1.0, 0.0);
    let mut sum = coef * weight(0.0);
    let mut abs_sum = sum.norm();
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        let num = (p.u + nf) * (p.v + nf);
        if num == 0.0 {
            // Polynomial case: every later term carries the zero factor.
            return Ok(SeriesValue {
                value: sum,
                tail_bound: 0.0,
                terms_used: n + 1,
                abs_sum,
            });
        }
        coef *= z * (num / ((p.w + nf) * (nf + 1.0)));
        let next = coef * weight(nf + 1.0);
        if let Some(mut q) = ratio_envelope(p, abs_z, nf + 1.0) {
            if weighted {
                q *= (nf + 2.0 + offset) / (nf + 1.0 + offset);
            }
            if q < 1.0 {
                let tail = next.norm() / (1.0 - q);
                if tail <= opts.tol * sum.norm().max(1.0) {
                    return Ok(SeriesValue {
                        value: sum,
                        tail_bound: tail,
                        terms_used: n + 1,
                        abs_sum,
                    });
                }
            }
        }
        sum += next;
        abs_sum += next.norm();
        n += 1;
        if n + 1 > opts.max_terms || !sum.is_finite() {
            return Err(HypergeomError::NoConvergence {
                max_terms: opts.max_terms,
                tol: opts.tol,
                abs_z,
            });
        }
    }
}

/// First or second derivative of `F` in `z` via
/// `w F'(u,v;w;z) = uv F(u+1,v+1;w+1;z)` (applied once or twice).
pub fn gauss_2f1_deriv(
    p: &HypergeomParams,
    z: Complex,
    order: u8,
    opts: &SeriesOptions,
) -> Result<SeriesValue, HypergeomError> {
    let (coef, shift) = match order {
        1 => (p.u * p.v / p.w, 1.0),
        2 => (
            p.u * p.v * (p.u + 1.0) * (p.v + 1.0) / (p.w * (p.w + 1.0)),
            2.0,
        ),
        other => return Err(HypergeomError::InvalidOrder(other)),
    };
    check_call(z, opts)?;
    if coef == 0.0 {
        return Ok(SeriesValue::exact(Complex::new(0.0, 0.0)));
    }
    let shifted = p.shifted(shift)?;
    Ok(gauss_2f1(&shifted, z, opts)?.scaled(coef))
}

/// `F`, `F'` and `F''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub f0: SeriesValue,
    pub f1: SeriesValue,
    pub f2: SeriesValue,
}

pub fn jet(p: &HypergeomParams, z: Complex, opts: &SeriesOptions) -> Result<Jet, HypergeomError> {
    Ok(Jet {
        f0: gauss_2f1(p, z, opts)?,
        f1: gauss_2f1_deriv(p, z, 1, opts)?,
        f2: gauss_2f1_deriv(p, z, 2, opts)?,
    })
}

/// The normalized function `𝔽 = z·F` and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedValues {
    pub f: SeriesValue,
    pub f1: SeriesValue,
    pub f2: SeriesValue,
}

fn combine(parts: &[(Complex, &SeriesValue)]) -> SeriesValue {
    let mut value = Complex::new(0.0, 0.0);
    let mut tail = 0.0;
    let mut abs_sum = 0.0;
    let mut terms = 0;
    for (c, s) in parts {
        value += c * s.value;
        tail += c.norm() * s.tail_bound;
        abs_sum += c.norm() * s.abs_sum;
        terms = terms.max(s.terms_used);
    }
    SeriesValue {
        value,
        tail_bound: tail,
        terms_used: terms,
        abs_sum,
    }
}

/// `𝔽 = zF`, `𝔽' = F + zF'`, `𝔽'' = 2F' + zF''`.
pub fn normalized_f(
    p: &HypergeomParams,
    z: Complex,
    opts: &SeriesOptions,
) -> Result<NormalizedValues, HypergeomError> {
    let j = jet(p, z, opts)?;
    Ok(normalized_from_jet(&j, z))
}

pub fn normalized_from_jet(j: &Jet, z: Complex) -> NormalizedValues {
    let one = Complex::new(1.0, 0.0);
    let two = Complex::new(2.0, 0.0);
    NormalizedValues {
        f: combine(&[(z, &j.f0)]),
        f1: combine(&[(one, &j.f0), (z, &j.f1)]),
        f2: combine(&[(two, &j.f1), (z, &j.f2)]),
    }
}

/// Residual of an identity evaluated from truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: Complex,
    /// Sum of constituent tail bounds, weighted by their coefficients.
    pub tail_sum: f64,
    /// Weighted sum of constituent term moduli (sizes rounding error).
    pub scale: f64,
}

impl Residual {
    pub fn norm(&self) -> f64 {
        self.value.norm()
    }

    /// `|residual| <= 10 · (tail_sum + rounding estimate)`.
    pub fn within_contract(&self) -> bool {
        self.norm() <= 10.0 * (self.tail_sum + 64.0 * f64::EPSILON * self.scale)
    }
}

/// `z(1-z)F'' + [w - (u+v+1)z]F' - uvF`.
pub fn ode_residual(
    p: &HypergeomParams,
    z: Complex,
    opts: &SeriesOptions,
) -> Result<Residual, HypergeomError> {
    let j = jet(p, z, opts)?;
    let one = Complex::new(1.0, 0.0);
    let c2 = z * (one - z);
    let c1 = p.w - (p.u + p.v + 1.0) * z;
    let c0 = Complex::new(-p.u * p.v, 0.0);
    let value = c2 * j.f2.value + c1 * j.f1.value + c0 * j.f0.value;
    Ok(Residual {
        value,
        tail_sum: c2.norm() * j.f2.tail_bound
            + c1.norm() * j.f1.tail_bound
            + c0.norm() * j.f0.tail_bound,
        scale: c2.norm() * j.f2.abs_sum + c1.norm() * j.f1.abs_sum + c0.norm() * j.f0.abs_sum,
    })
}

/// `F(u,v;w;z) - (1-z)^{w-u-v} F(w-u,w-v;w;z)` on the principal branch.
pub fn euler_transform_residual(
    p: &HypergeomParams,
    z: Complex,
    opts: &SeriesOptions,
) -> Result<Residual, HypergeomError> {
    let lhs = gauss_2f1(p, z, opts)?;
    let partner = HypergeomParams::new(p.w - p.u, p.w - p.v, p.w)?;
    let rhs = gauss_2f1(&partner, z, opts)?;
    let factor = (Complex::new(1.0, 0.0) - z).powf(p.w - p.u - p.v);
    Ok(Residual {
        value: lhs.value - factor * rhs.value,
        tail_sum: lhs.tail_bound + factor.norm() * rhs.tail_bound,
        scale: lhs.abs_sum + factor.norm() * rhs.abs_sum,
    })
}

/// `w F'(u,v;w;z) - uv F(u+1,v+1;w+1;z)` with `F'` from the term-wise
/// differentiated series.
pub fn recurrence_residual(
    p: &HypergeomParams,
    z: Complex,
    opts: &SeriesOptions,
) -> Result<Residual, HypergeomError> {
    let d = termwise_derivative(p, z, opts)?;
    let up = gauss_2f1(&p.shifted(1.0)?, z, opts)?;
    let uv = (p.u * p.v).abs();
    Ok(Residual {
        value: d.value * p.w - up.value * (p.u * p.v),
        tail_sum: p.w.abs() * d.tail_bound + uv * up.tail_bound,
        scale: p.w.abs() * d.abs_sum + uv * up.abs_sum,
    })
}

/// `(F(z+h) - F(z-h)) / 2h`.
pub fn central_difference(
    p: &HypergeomParams,
    z: Complex,
    h: f64,
    opts: &SeriesOptions,
) -> Result<Complex, HypergeomError> {
    let step = Complex::new(h, 0.0);
    let plus = gauss_2f1(p, z + step, opts)?;
    let minus = gauss_2f1(p, z - step, opts)?;
    Ok((plus.value - minus.value) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn params(u: f64, v: f64, w: f64) -> HypergeomParams {
        HypergeomParams::new(u, v, w).unwrap()
    }

    fn opts() -> SeriesOptions {
        SeriesOptions::default()
    }

    // Oracle: Σ z^n/(n+1), summed directly.
    fn log_series(z: f64) -> f64 {
        (0..400).map(|n| z.powi(n) / f64::from(n + 1)).sum()
    }

    #[test]
    fn value_at_origin_is_one() {
        for (u, v, w) in [(0.3, -2.0, 1.5), (5.0, 5.0, -2.5), (1.0, 1.0, 2.0)] {
            let s = gauss_2f1(&params(u, v, w), c(0.0, 0.0), &opts()).unwrap();
            assert_eq!(s.value, c(1.0, 0.0));
            assert_eq!(s.tail_bound, 0.0);
        }
    }

    #[test]
    fn log_closed_form() {
        let s = gauss_2f1(&params(1.0, 1.0, 2.0), c(0.5, 0.0), &opts()).unwrap();
        let oracle = log_series(0.5);
        assert!((oracle - 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((s.value.re - oracle).abs() < 1e-12);
        assert!(s.value.im == 0.0);
        assert!(s.tail_bound <= 1e-12 * s.value.norm());
    }

    #[test]
    fn binomial_closed_form() {
        // F(a,b;b;z) = (1-z)^{-a}; oracle: binomial series Σ (a)_n z^n / n!
        let s = gauss_2f1(&params(2.0, 3.0, 3.0), c(0.5, 0.0), &opts()).unwrap();
        let oracle: f64 = (0..200)
            .map(|n| f64::from(n + 1) * 0.5f64.powi(n))
            .sum();
        assert!((oracle - 4.0).abs() < 1e-12);
        assert!((s.value.re - 4.0).abs() < 1e-11);
    }

    #[test]
    fn first_derivative_examples() {
        let p = params(1.0, 1.0, 2.0);
        let d0 = gauss_2f1_deriv(&p, c(0.0, 0.0), 1, &opts()).unwrap();
        assert_eq!(d0.value, c(0.5, 0.0));
        let d = gauss_2f1_deriv(&p, c(0.5, 0.0), 1, &opts()).unwrap();
        let expect = 4.0 - 4.0 * 2f64.ln();
        assert!((d.value.re - expect).abs() < 1e-11);
        let fd = central_difference(&p, c(0.5, 0.0), 1e-6, &opts()).unwrap();
        assert!((fd.re - expect).abs() < 1e-8);
    }

    #[test]
    fn second_derivative_at_origin() {
        let p = params(0.7, -1.3, 2.2);
        let d = gauss_2f1_deriv(&p, c(0.0, 0.0), 2, &opts()).unwrap();
        let expect = 0.7 * -1.3 * 1.7 * -0.3 / (2.2 * 3.2);
        assert!((d.value.re - expect).abs() < 1e-15);
        assert!(matches!(
            gauss_2f1_deriv(&p, c(0.0, 0.0), 3, &opts()),
            Err(HypergeomError::InvalidOrder(3))
        ));
    }

    #[test]
    fn normalized_examples() {
        let p = params(0.4, 2.5, -1.5);
        let nv = normalized_f(&p, c(0.0, 0.0), &opts()).unwrap();
        assert_eq!(nv.f.value, c(0.0, 0.0));
        assert_eq!(nv.f1.value, c(1.0, 0.0));
        assert!((nv.f2.value.re - 2.0 * 0.4 * 2.5 / -1.5).abs() < 1e-15);
        let nv = normalized_f(&params(1.0, 1.0, 2.0), c(0.5, 0.0), &opts()).unwrap();
        assert!((nv.f.value.re - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(
            HypergeomParams::new(1.0, 1.0, 0.0),
            Err(HypergeomError::ParamPole(0.0))
        );
        assert!(HypergeomParams::new(1.0, 1.0, -3.0).is_err());
        assert!(HypergeomParams::new(f64::NAN, 1.0, 2.0).is_err());
        let p = params(1.0, 1.0, 2.0);
        assert!(matches!(
            gauss_2f1(&p, c(0.995, 0.0), &opts()),
            Err(HypergeomError::Domain { .. })
        ));
        assert!(matches!(
            gauss_2f1(&p, c(0.5, 0.0), &opts().with_tol(1e-16)),
            Err(HypergeomError::InvalidTolerance(_))
        ));
        let tight = SeriesOptions {
            max_terms: 20,
            ..opts()
        };
        assert!(matches!(
            gauss_2f1(&p, c(0.9, 0.0), &tight),
            Err(HypergeomError::NoConvergence { .. })
        ));
    }

    #[test]
    fn polynomial_cutoff() {
        for m in 0..8u32 {
            let p = params(-f64::from(m), 1.7, 0.3);
            let s = gauss_2f1(&p, c(0.9, 0.2), &opts()).unwrap();
            assert!(s.terms_used as u32 <= m + 2, "m = {m}: {}", s.terms_used);
            assert_eq!(s.tail_bound, 0.0);
        }
        // F(-2, v; w; z) = 1 - 2vz/w + v(v+1)z²/(w(w+1))
        let (v, w) = (1.7, 0.3);
        let z = c(0.9, 0.2);
        let poly = 1.0 - 2.0 * v * z / w + v * (v + 1.0) * z * z / (w * (w + 1.0));
        let s = gauss_2f1(&params(-2.0, v, w), z, &opts()).unwrap();
        assert!((s.value - poly).norm() < 1e-13);
    }

    #[test]
    fn identity_residuals_small() {
        let p = params(0.5, 0.3, 1.7);
        let z = c(0.4, 0.3);
        let r = ode_residual(&p, z, &opts()).unwrap();
        assert!(r.norm() < 1e-10);
        assert!(r.within_contract());
        let e = euler_transform_residual(&p, z, &opts()).unwrap();
        assert!(e.norm() < 1e-10);
        let r = ode_residual(&params(1.0, 1.0, 2.0), c(0.5, 0.0), &opts()).unwrap();
        assert!(r.norm() < 1e-10);
        let r0 = ode_residual(&params(2.3, -0.4, 1.1), c(0.0, 0.0), &opts()).unwrap();
        assert_eq!(r0.value, c(0.0, 0.0));
        let e0 = euler_transform_residual(&p, c(0.0, 0.0), &opts()).unwrap();
        assert_eq!(e0.value, c(0.0, 0.0));
    }

    #[test]
    fn symmetry_is_exact() {
        let p = params(0.37, -2.6, 3.3);
        let z = c(-0.5, 0.61);
        let a = gauss_2f1(&p, z, &opts()).unwrap();
        let b = gauss_2f1(&p.swapped(), z, &opts()).unwrap();
        assert_eq!(a.value, b.value);
    }

    // Oracle: plain forward summation far past the stopping index.
    fn brute(p: &HypergeomParams, z: Complex, weight: impl Fn(f64) -> f64) -> Complex {
        let mut coef = c(1.0, 0.0);
        let mut sum = coef * weight(0.0);
        for n in 0..20_000 {
            let nf = f64::from(n);
            coef *= z * ((p.u() + nf) * (p.v() + nf) / ((p.w() + nf) * (nf + 1.0)));
            sum += coef * weight(nf + 1.0);
        }
        sum
    }

    #[test]
    fn derivative_routes_agree() {
        let p = params(0.8, -1.6, 2.9);
        let z = c(0.55, -0.35);
        let shift = gauss_2f1_deriv(&p, z, 1, &opts()).unwrap();
        let term = termwise_derivative(&p, z, &opts()).unwrap();
        assert!((shift.value - term.value).norm() < 1e-12 * shift.value.norm().max(1.0));
        let oracle = brute(&p, z, |n| n) / z;
        assert!((term.value - oracle).norm() < 1e-12);
        let direct = normalized_derivative_direct(&p, z, &opts()).unwrap();
        let nv = normalized_f(&p, z, &opts()).unwrap();
        assert!((direct.value - nv.f1.value).norm() < 1e-12);
        assert!((direct.value - brute(&p, z, |n| n + 1.0)).norm() < 1e-12);
        assert_eq!(
            termwise_derivative(&p, c(0.0, 0.0), &opts()).unwrap().value,
            c(0.8 * -1.6 / 2.9, 0.0)
        );
    }

    proptest! {
        #[test]
        fn truncation_contract(
            u in -3.0..5.0f64,
            v in -3.0..5.0f64,
            w in -3.0..5.0f64,
            r in 0.0..0.95f64,
            t in 0.0..std::f64::consts::TAU,
        ) {
            prop_assume!((w - w.round()).abs() > 1e-3 || w > 0.5);
            let p = params(u, v, w);
            let z = Complex::from_polar(r, t);
            let s = gauss_2f1(&p, z, &opts()).unwrap();
            let oracle = brute(&p, z, |_| 1.0);
            let diff = (s.value - oracle).norm();
            prop_assert!(
                diff <= s.tail_bound + 4.0 * f64::EPSILON * s.abs_sum * (s.terms_used as f64).sqrt() + 64.0 * f64::EPSILON * oracle.norm(),
                "diff {diff:e}, tail {:e}", s.tail_bound
            );
            prop_assert!(s.tail_bound <= opts().tol * s.value.norm().max(1.0));
        }
    }
}
