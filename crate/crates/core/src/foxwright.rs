//! Fox–Wright `pΨq` series: the `ψ_k` moments, the two-sided exponential
//! bound that holds when `ψ1 > ψ2` and `ψ1² < ψ0 ψ2`, and direct summation.

use crate::error::{FoxWrightError, SpecFunError};
use crate::hypergeom::{Complex, SeriesOptions, SeriesValue};
use crate::specfun::{is_nonpositive_integer, log_gamma_signed};

const LOG_OVERFLOW: f64 = 700.0;
// consecutive Raabe estimates needed before a tail is accepted
const RATIO_WINDOW: usize = 5;

/// Upper pairs `(a_j, A_j)` and lower pairs `(b_j, B_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxWrightParams {
    upper: Vec<(f64, f64)>,
    lower: Vec<(f64, f64)>,
}

impl FoxWrightParams {
    /// Rejects parameters whose gamma arguments hit a pole for `k = 0, 1, 2`.
    pub fn new(upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self, FoxWrightError> {
        for &(a, s) in upper.iter().chain(lower.iter()) {
            for k in 0..3 {
                let x = a + s * f64::from(k);
                if !x.is_finite() {
                    return Err(SpecFunError::NonFinite(x).into());
                }
                if is_nonpositive_integer(x) {
                    return Err(SpecFunError::Pole(x).into());
                }
            }
        }
        Ok(Self { upper, lower })
    }

    pub fn upper(&self) -> &[(f64, f64)] {
        &self.upper
    }

    pub fn lower(&self) -> &[(f64, f64)] {
        &self.lower
    }

    /// Signed log of `Π Γ(a_j + A_j x) / Π Γ(b_j + B_j x)`; `None` when a
    /// lower gamma sits on a pole (the coefficient is then exactly zero).
    fn log_coefficient(&self, x: f64) -> Result<Option<(f64, i8)>, FoxWrightError> {
        let mut log = 0.0;
        let mut sign = 1i8;
        for &(a, s) in &self.upper {
            let g = log_gamma_signed(a + s * x)?;
            log += g.log_abs;
            sign *= g.sign;
        }
        for &(b, s) in &self.lower {
            match log_gamma_signed(b + s * x) {
                Ok(g) => {
                    log -= g.log_abs;
                    sign *= g.sign;
                }
                Err(SpecFunError::Pole(_)) => return Ok(None),
                Err(e) => return Err(e.into()),
            }
        }
        Ok(Some((log, sign)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiMoments {
    pub psi0: f64,
    pub psi1: f64,
    pub psi2: f64,
}

/// `ψ_k = Π Γ(a_j + A_j k) / Π Γ(b_j + B_j k)` for `k = 0, 1, 2`, summed in
/// log space and exponentiated once.
pub fn psi_moments(fw: &FoxWrightParams) -> Result<PsiMoments, FoxWrightError> {
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let (log, sign) = fw
            .log_coefficient(k as f64)?
            .expect("constructor excludes lower poles at k = 0, 1, 2");
        if log.abs() > LOG_OVERFLOW {
            return Err(FoxWrightError::Overflow(log));
        }
        *slot = f64::from(sign) * log.exp();
    }
    Ok(PsiMoments {
        psi0: out[0],
        psi1: out[1],
        psi2: out[2],
    })
}

/// `ψ1 > ψ2` and `ψ1² < ψ0 ψ2`.
pub fn ps_validity(m: &PsiMoments) -> bool {
    m.psi1 > m.psi2 && m.psi1 * m.psi1 < m.psi0 * m.psi2
}

/// Lower `ψ0 exp(ψ1|z|/ψ0)` and upper `ψ0 + (e^{|z|} - 1) ψ1`.
pub fn ps_bounds(m: &PsiMoments, abs_z: f64) -> Result<(f64, f64), FoxWrightError> {
    if !ps_validity(m) || !(m.psi0 > 0.0) {
        return Err(FoxWrightError::Validity);
    }
    let lower = m.psi0 * (m.psi1 / m.psi0 * abs_z).exp();
    let upper = m.psi0 + abs_z.exp_m1() * m.psi1;
    Ok((lower, upper))
}

/// Partial sum of `Σ_n [Π Γ(a_j + A_j n) / Π Γ(b_j + B_j n)] z^n / n!`.
///
/// Convergence is judged empirically. With term ratios `r_k` the Raabe
/// numbers `s_k = (k+1)(1 - r_k)` are tracked; once the last few all exceed
/// one, the tail is estimated by `|t_{n+1}| (1 + (n+1)/(s-1))` with `s` their
/// minimum. This covers both geometric decay and the algebraic decay seen at
/// `z = 1` for balanced parameters.
pub fn fox_wright_eval(
    fw: &FoxWrightParams,
    z: f64,
    opts: &SeriesOptions,
) -> Result<SeriesValue, FoxWrightError> {
    if !(z.abs() <= 1.0) {
        return Err(FoxWrightError::Domain(z));
    }
    let term_at = |n: usize| -> Result<f64, FoxWrightError> {
        let nf = n as f64;
        match fw.log_coefficient(nf)? {
            None => Ok(0.0),
            Some((log, sign)) => {
                if z == 0.0 {
                    return Ok(if n == 0 {
                        f64::from(sign) * log.exp()
                    } else {
                        0.0
                    });
                }
                let lg =
                    log - crate::specfun::log_gamma_signed(nf + 1.0)?.log_abs + nf * z.abs().ln();
                let sgn = f64::from(sign) * if z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                Ok(sgn * lg.exp())
            }
        }
    };

    let t0 = term_at(0)?;
    if z == 0.0 {
        return Ok(SeriesValue {
            value: Complex::new(t0, 0.0),
            tail_bound: 0.0,
            terms_used: 1,
            abs_sum: t0.abs(),
        });
    }
    let mut sum = t0;
    let mut abs_sum = t0.abs();
    let mut prev = t0;
    let mut raabe: Vec<f64> = Vec::with_capacity(RATIO_WINDOW);
    for n in 0..opts.max_terms {
        let next = term_at(n + 1)?;
        if prev != 0.0 && next.is_finite() {
            let r = next.abs() / prev.abs();
            if raabe.len() == RATIO_WINDOW {
                raabe.remove(0);
            }
            raabe.push((n as f64 + 1.0) * (1.0 - r));
        } else {
            raabe.clear();
        }
        if raabe.len() == RATIO_WINDOW {
            let s = raabe.iter().copied().fold(f64::INFINITY, f64::min);
            if s > 1.0 {
                let tail = next.abs() * (1.0 + (n as f64 + 1.0) / (s - 1.0));
                if tail <= opts.tol * (abs_sum + next.abs()) {
                    return Ok(SeriesValue {
                        value: Complex::new(sum, 0.0),
                        tail_bound: tail,
                        terms_used: n + 1,
                        abs_sum,
                    });
                }
            }
        }
        sum += next;
        abs_sum += next.abs();
        if !sum.is_finite() {
            break;
        }
        prev = next;
    }
    Err(FoxWrightError::NoConvergence(opts.max_terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;
    use std::f64::consts::E;

    fn opts() -> SeriesOptions {
        SeriesOptions::default()
    }

    fn h1_instance(u: f64, v: f64, w: f64) -> FoxWrightParams {
        FoxWrightParams::new(
            vec![(u + 1.0, 1.0), (v + 1.0, 1.0), (1.0, 1.0)],
            vec![(w + 1.0, 1.0), (2.0, 1.0)],
        )
        .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn h1_instance_moments() {
        let (u, v, w) = (0.1, 0.3, 5.0);
        let m = psi_moments(&h1_instance(u, v, w)).unwrap();
        let g = |x: f64| gamma(x).unwrap();
        assert!(rel(m.psi0, g(u + 1.0) * g(v + 1.0) / g(w + 1.0)) < 1e-10);
        assert!(rel(m.psi1, g(u + 2.0) * g(v + 2.0) / (2.0 * g(w + 2.0))) < 1e-10);
        assert!(rel(m.psi2, g(u + 3.0) * g(v + 3.0) / (3.0 * g(w + 3.0))) < 1e-10);
    }

    #[test]
    fn convex_instance_moment() {
        let (u, v, w) = (0.4, 1.5, 3.2);
        let fw = FoxWrightParams::new(
            vec![(u, 1.0), (v, 1.0), (2.0, 1.0)],
            vec![(w, 1.0), (1.0, 1.0)],
        )
        .unwrap();
        let m = psi_moments(&fw).unwrap();
        let g = |x: f64| gamma(x).unwrap();
        assert!(rel(m.psi1, 2.0 * g(u + 1.0) * g(v + 1.0) / g(w + 1.0)) < 1e-10);
    }

    #[test]
    fn cancelling_pairs() {
        let fw = FoxWrightParams::new(vec![(1.0, 1.0)], vec![(1.0, 1.0)]).unwrap();
        let m = psi_moments(&fw).unwrap();
        assert_eq!((m.psi0, m.psi1, m.psi2), (1.0, 1.0, 1.0));
        let s = fox_wright_eval(&fw, 1.0, &opts()).unwrap();
        assert!((s.value.re - E).abs() < 1e-12);
        let s0 = fox_wright_eval(&fw, 0.0, &opts()).unwrap();
        assert_eq!(s0.value.re, 1.0);
    }

    #[test]
    fn validity_examples() {
        let m = |a, b, c| PsiMoments {
            psi0: a,
            psi1: b,
            psi2: c,
        };
        assert!(!ps_validity(&m(1.0, 1.0, 1.0)));
        assert!(!ps_validity(&m(4.0, 2.0, 1.0)));
        assert!(ps_validity(&m(10.0, 2.0, 1.0)));
        assert_eq!(
            ps_bounds(&m(4.0, 2.0, 1.0), 0.5),
            Err(FoxWrightError::Validity)
        );
    }

    #[test]
    fn bound_examples() {
        let m = PsiMoments {
            psi0: 10.0,
            psi1: 2.0,
            psi2: 1.0,
        };
        assert_eq!(ps_bounds(&m, 0.0).unwrap(), (10.0, 10.0));
        let (lo, hi) = ps_bounds(&m, 1.0).unwrap();
        assert!((lo - 10.0 * 0.2f64.exp()).abs() < 1e-12);
        assert!((hi - (10.0 + 2.0 * (E - 1.0))).abs() < 1e-12);
        assert!((lo - 12.214).abs() < 1e-3 && (hi - 13.437).abs() < 1e-3);
    }

    #[test]
    fn h1_instance_sits_in_sandwich() {
        let fw = h1_instance(0.1, 0.1, 5.0);
        let m = psi_moments(&fw).unwrap();
        assert!(ps_validity(&m));
        let s = fox_wright_eval(&fw, 1.0, &opts()).unwrap();
        let (lo, hi) = ps_bounds(&m, 1.0).unwrap();
        assert!(s.value.re.is_finite());
        assert!(
            lo - 1e-9 <= s.value.re && s.value.re <= hi + 1e-9,
            "{lo} {} {hi}",
            s.value.re
        );
    }

    #[test]
    fn convex_upper_instance() {
        // 3Ψ2[(u+1,1),(v+1,1),(3,1);(w+1,1),(2,1);1] against
        // 3Γ(u+2)Γ(v+2)(e-1)/Γ(w+2) + 2Γ(u+1)Γ(v+1)/Γ(w+1)
        let (u, v, w) = (0.1, 0.1, 10.0);
        let fw = FoxWrightParams::new(
            vec![(u + 1.0, 1.0), (v + 1.0, 1.0), (3.0, 1.0)],
            vec![(w + 1.0, 1.0), (2.0, 1.0)],
        )
        .unwrap();
        let m = psi_moments(&fw).unwrap();
        let g = |x: f64| gamma(x).unwrap();
        assert!(rel(m.psi0, 2.0 * g(u + 1.0) * g(v + 1.0) / g(w + 1.0)) < 1e-10);
        assert!(rel(m.psi1, 3.0 * g(u + 2.0) * g(v + 2.0) / g(w + 2.0)) < 1e-10);
        assert!(rel(m.psi2, 4.0 * g(u + 3.0) * g(v + 3.0) / g(w + 3.0)) < 1e-10);
        let upper = m.psi1 * (E - 1.0) + m.psi0;
        let s = fox_wright_eval(&fw, 1.0, &opts()).unwrap();
        assert!(s.value.re <= upper, "{} > {upper}", s.value.re);
        // direct oracle: Σ (n+2)(u+1)_n (v+1)_n / (w+1)_n / n! · Γ(u+1)Γ(v+1)/Γ(w+1)
        let mut t = g(u + 1.0) * g(v + 1.0) / g(w + 1.0);
        let mut direct = 0.0;
        for n in 0..5000 {
            let nf = f64::from(n);
            direct += (nf + 2.0) * t;
            t *= (u + 1.0 + nf) * (v + 1.0 + nf) / ((w + 1.0 + nf) * (nf + 1.0));
        }
        assert!(
            rel(s.value.re, direct) < 1e-10,
            "{} vs {direct}",
            s.value.re
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            FoxWrightParams::new(vec![(-1.0, 1.0)], vec![]),
            Err(FoxWrightError::Gamma(SpecFunError::Pole(_)))
        ));
        let big = FoxWrightParams::new(vec![(300.0, 1.0)], vec![]).unwrap();
        assert!(matches!(
            psi_moments(&big),
            Err(FoxWrightError::Overflow(_))
        ));
        // Σ n! z^n / n! = Σ z^n diverges at z = 1
        let div = FoxWrightParams::new(vec![(1.0, 1.0)], vec![]).unwrap();
        assert!(matches!(
            fox_wright_eval(&div, 1.0, &opts()),
            Err(FoxWrightError::NoConvergence(_))
        ));
        assert!(matches!(
            fox_wright_eval(&div, 1.5, &opts()),
            Err(FoxWrightError::Domain(_))
        ));
    }
}
