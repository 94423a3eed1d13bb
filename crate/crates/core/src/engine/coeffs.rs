//! Public coefficient operations on a [`ParameterSet`].

use std::f64::consts::PI;

use num_complex::Complex64;

use super::tail::{kernel_sum, power_sum, Estimate, Kernel, DEFAULT_MAX_N};
use super::CoefficientTable;
use crate::error::{FwxError, Result};
use crate::params::{ParameterSet, INTEGER_MU_TOL};
use crate::special::{digamma, gamma, ln_gamma_real, rgamma};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest index for which the gamma prefactors of `R_m`, `W_m` and the
/// log-case coefficients stay finite in double precision.
pub const MAX_COEFF_INDEX: usize = 150;

fn check_index(m: usize) -> Result<()> {
    if m > MAX_COEFF_INDEX {
        return Err(FwxError::Index(format!("index {m} exceeds {MAX_COEFF_INDEX}")));
    }
    Ok(())
}

/// Table whose `V_n` are well defined: scales above 1/6 and `Re μσ > 0`.
fn v_table(ps: &ParameterSet, sigma: f64, theta: f64) -> Result<std::sync::Arc<CoefficientTable>> {
    ps.check_scales()?;
    let sigma = ps.choose_sigma(Some(sigma))?;
    ps.table(sigma, theta)
}

fn non_integer_mu(ps: &ParameterSet) -> Result<()> {
    if ps.integer_mu().is_some() {
        return Err(FwxError::IntegerMu {
            mu: ps.mu(),
            tol: INTEGER_MU_TOL,
        });
    }
    Ok(())
}

fn enforce(e: Estimate, tol: f64) -> Result<Estimate> {
    if e.err <= tol * e.value.norm() || e.err == 0.0 {
        Ok(e)
    } else {
        Err(FwxError::Tolerance {
            requested: tol,
            achieved: e.err / e.value.norm().max(f64::MIN_POSITIVE),
            terms: e.terms,
        })
    }
}

pub fn q_m(ps: &ParameterSet, sigma: f64, m: usize) -> Result<Complex64> {
    if m == 0 {
        return Err(FwxError::Index("q_m needs m >= 1".into()));
    }
    Ok(ps.table(sigma, 0.0)?.q(m))
}

pub fn q_m_theta(ps: &ParameterSet, sigma: f64, theta: f64, m: usize) -> Result<Complex64> {
    if m == 0 {
        return Err(FwxError::Index("q_m needs m >= 1".into()));
    }
    Ok(ps.table(sigma, theta)?.q_theta(m))
}

pub fn l_r(ps: &ParameterSet, sigma: f64, r: usize) -> Result<Complex64> {
    Ok(ps.table(sigma, 0.0)?.l(r))
}

pub fn l_r_theta(ps: &ParameterSet, sigma: f64, theta: f64, r: usize) -> Result<Complex64> {
    Ok(ps.table(sigma, theta)?.l_theta(r))
}

pub fn v_n(ps: &ParameterSet, sigma: f64, theta: f64, n: usize) -> Result<Complex64> {
    Ok(v_table(ps, sigma, theta)?.v(n))
}

/// `V_n(θ)` through the Bernoulli-Nørlund polynomials instead of Stirling numbers.
pub fn v_n_norlund(ps: &ParameterSet, sigma: f64, theta: f64, n: usize) -> Result<Complex64> {
    Ok(v_table(ps, sigma, theta)?.v_norlund(n))
}

/// `R_m`; identical to [`coeff_r_theta`] at `θ = 0`.
pub fn coeff_r(ps: &ParameterSet, sigma: f64, m: usize) -> Result<Estimate> {
    coeff_r_theta(ps, sigma, 0.0, m)
}

/// `R_m` assembled from `V_n(θ)`.
pub fn coeff_r_theta(ps: &ParameterSet, sigma: f64, theta: f64, m: usize) -> Result<Estimate> {
    non_integer_mu(ps)?;
    check_index(m)?;
    let t = v_table(ps, sigma, theta)?;
    Ok(r_from_table(&t, m))
}

pub(crate) fn r_from_table(t: &CoefficientTable, m: usize) -> Estimate {
    let mu = t.mu();
    let theta = t.theta();
    let v = t.v_prefix(m + 1);
    let noise = t.v_noise_prefix(m + 1);
    let gm = |x: Complex64| gamma(x).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let pref = -gm(mu + t.sigma() + m as f64) * gm(mu + theta + 1.0 + m as f64) * rgamma(mu + 1.0 + m as f64) * PI
        / (mu * PI).sin();
    let mut acc = ZERO;
    let mut mass = 0.0;
    let mut round = 0.0;
    let mut inv_fact = 1.0;
    // n runs downwards so 1/(m-n)! builds up incrementally
    for n in (0..=m).rev() {
        let k = m - n;
        if k > 0 {
            inv_fact /= k as f64;
        }
        let w = rgamma(mu + theta + 1.0 + n as f64) * inv_fact;
        let term = if n % 2 == 1 { -v[n] * w } else { v[n] * w };
        acc += term;
        mass += term.norm();
        round += noise[n] * w.norm();
    }
    Estimate {
        value: pref * acc,
        err: pref.norm() * (round + 4.0 * f64::EPSILON * mass),
        terms: m + 1,
    }
}

/// `W_m` with its tail summed to relative `tol`.
pub fn coeff_w(ps: &ParameterSet, sigma: f64, m: usize, tol: f64) -> Result<Estimate> {
    coeff_w_theta(ps, sigma, 0.0, m, tol)
}

/// `W_m` assembled from `V_n(θ)`.
pub fn coeff_w_theta(ps: &ParameterSet, sigma: f64, theta: f64, m: usize, tol: f64) -> Result<Estimate> {
    non_integer_mu(ps)?;
    check_index(m)?;
    let t = v_table(ps, sigma, theta)?;
    enforce(w_from_table(&t, m, tol, DEFAULT_MAX_N)?, tol)
}

/// `W_m` from `V_n(θ)` with its error estimate, without failing when the
/// estimate exceeds `tol`; for callers that judge accuracy themselves.
pub fn coeff_w_estimate(ps: &ParameterSet, sigma: f64, theta: f64, m: usize, tol: f64) -> Result<Estimate> {
    non_integer_mu(ps)?;
    check_index(m)?;
    let t = v_table(ps, sigma, theta)?;
    w_from_table(&t, m, tol, DEFAULT_MAX_N)
}

pub(crate) fn w_from_table(t: &CoefficientTable, m: usize, tol: f64, max_n: usize) -> Result<Estimate> {
    let mu = t.mu();
    let theta = t.theta();
    let mf = m as f64;
    let kernel = Kernel::new(mu - mf, mu + theta + 1.0, 0);
    let s = kernel_sum(t, &kernel, tol, max_n)?;
    let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
    let pref = gamma(Complex64::new(t.sigma() + mf, 0.0))? * gamma(Complex64::new(mf + theta + 1.0, 0.0))? * rgamma(Complex64::new(mf + 1.0, 0.0)) * sign;
    Ok(Estimate {
        value: pref * s.value,
        err: pref.norm() * s.err,
        terms: s.terms,
    })
}

/// `Γ(σ) Σ_n V_n/(μ + n)`, the value of the function at `z = ρ` (analytically
/// continued in the parameters when `Re μ <= 0`).
pub fn at_rho_sum(ps: &ParameterSet, sigma: f64, tol: f64) -> Result<Estimate> {
    if let Some(k) = ps.integer_mu() {
        if k <= 0 {
            return Err(FwxError::IntegerMu {
                mu: ps.mu(),
                tol: INTEGER_MU_TOL,
            });
        }
    }
    if sigma <= 0.0 || ps.mu().re + sigma <= 0.0 {
        return Err(FwxError::Sigma(format!("sigma = {sigma} needs sigma > max(-Re mu, 0)")));
    }
    let t = v_table(ps, sigma, 0.0)?;
    let mu = ps.mu();
    let s = kernel_sum(&t, &Kernel::new(mu, mu + 1.0, 0), tol, DEFAULT_MAX_N)?;
    let g = gamma(Complex64::new(sigma, 0.0))?;
    Ok(Estimate {
        value: g * s.value,
        err: g.norm() * s.err,
        terms: s.terms,
    })
}

/// `H(t/ρ) = t^{θ+1} (1-t)^{μσ-1} Σ_n V_n(θ) (1-t)^n` for `|1 - t| < 1`.
pub fn h_series(ps: &ParameterSet, sigma: f64, theta: f64, t: Complex64, tol: f64) -> Result<Estimate> {
    let w = Complex64::new(1.0, 0.0) - t;
    if !(w.norm() < 1.0) {
        return Err(FwxError::Domain(format!("|1 - t| = {} must be below 1", w.norm())));
    }
    let table = v_table(ps, sigma, theta)?;
    let expo = table.mu_sigma() - 1.0;
    let wpow = if w == ZERO {
        if expo.re > 0.0 {
            return Ok(Estimate {
                value: ZERO,
                err: 0.0,
                terms: 0,
            });
        } else if expo == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            return Err(FwxError::Domain("H diverges at t = 1 when Re(mu + sigma) < 1".into()));
        }
    } else {
        w.powc(expo)
    };
    let s = power_sum(&table, t, tol, DEFAULT_MAX_N)?;
    let pref = t.powf(theta + 1.0) * wpow;
    enforce(
        Estimate {
            value: pref * s.value,
            err: pref.norm() * s.err,
            terms: s.terms,
        },
        tol,
    )
}

/// Coefficients of `(1-z)^i log(1-z)` and `(1-z)^i` in the integer-`μ` expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCaseCoeff {
    pub index: i64,
    pub log_part: Complex64,
    pub regular_part: Complex64,
    pub err: f64,
}

/// `h_{s,m} = ψ(m + 1) - ψ(m + s + σ)`.
fn h(s: f64, m: usize, sigma: f64) -> Result<f64> {
    let mf = m as f64;
    Ok(digamma(Complex64::new(mf + 1.0, 0.0))?.re - digamma(Complex64::new(mf + s + sigma, 0.0))?.re)
}

/// `Γ(x) / (p! q!)` through logarithms.
fn gamma_over_factorials(x: f64, p: usize, q: usize) -> Result<f64> {
    let (lx, sx) = ln_gamma_real(x)?;
    let lp = ln_gamma_real(p as f64 + 1.0)?.0;
    let lq = ln_gamma_real(q as f64 + 1.0)?.0;
    Ok(sx * (lx - lp - lq).exp())
}

fn alt(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Coefficients at power `i` of `1 - z` for integer `μ`; `i` ranges from
/// `min(μ, 0)` upward.
pub fn log_case_coeffs(ps: &ParameterSet, sigma: f64, i: i64, tol: f64) -> Result<LogCaseCoeff> {
    let big_m = ps.integer_mu().ok_or_else(|| FwxError::Domain(format!("mu = {} is not an integer", ps.mu())))?;
    if big_m < 0 && sigma <= -(big_m as f64) {
        return Err(FwxError::Sigma(format!("mu = {big_m} requires sigma > {}", -big_m)));
    }
    if i > MAX_COEFF_INDEX as i64 {
        return Err(FwxError::Index(format!("index {i} exceeds {MAX_COEFF_INDEX}")));
    }
    let t = v_table(ps, sigma, 0.0)?;
    log_from_table(&t, big_m, i, tol)
}

pub(crate) fn log_from_table(t: &CoefficientTable, big_m: i64, i: i64, tol: f64) -> Result<LogCaseCoeff> {
    let sigma = t.sigma();
    let mf = big_m as f64;
    let mut out = LogCaseCoeff {
        index: i,
        log_part: ZERO,
        regular_part: ZERO,
        err: 0.0,
    };
    if i < big_m.min(0) {
        return Ok(out);
    }
    let mut mass = 0.0;
    if big_m >= 0 {
        let j = i - big_m;
        if j >= 0 {
            let ju = j as usize;
            let v = t.v_prefix(ju + 1);
            let noise = t.v_noise_prefix(ju + 1);
            for n in 0..=ju {
                let w = gamma_over_factorials(mf + sigma + j as f64, big_m as usize + n, ju - n)? * alt(big_m + n as i64);
                let hh = h(mf + n as f64, ju - n, sigma)?;
                out.log_part -= v[n] * w;
                out.regular_part += v[n] * (w * hh);
                mass += (v[n] * w).norm() * (1.0 + hh.abs());
                out.err += noise[n] * w.abs() * (1.0 + hh.abs());
            }
        }
        if j >= -big_m {
            let kernel = Kernel::new(Complex64::new(-(j as f64), 0.0), Complex64::new(mf + 1.0, 0.0), (j + 1).max(0) as usize);
            let s = kernel_sum(t, &kernel, tol, DEFAULT_MAX_N)?;
            let g = gamma(Complex64::new(mf + sigma + j as f64, 0.0))?.re * alt(big_m + j + 1);
            out.regular_part -= s.value * g;
            out.err += s.err * g.abs();
        }
    } else if i < 0 {
        let top = (i - big_m) as usize;
        let v = t.v_prefix(top + 1);
        let noise = t.v_noise_prefix(top + 1);
        let g = gamma(Complex64::new(sigma + i as f64, 0.0))?.re;
        for n in 0..=top {
            // (-M-n-1)!/(-M-n+i)!
            let hi = (-big_m - n as i64 - 1) as f64;
            let lo = (-big_m - n as i64 + i) as f64;
            let w = g * (ln_gamma_real(hi + 1.0)?.0 - ln_gamma_real(lo + 1.0)?.0).exp();
            out.regular_part += v[n] * w;
            mass += (v[n] * w).norm();
            out.err += noise[n] * w.abs();
        }
    } else {
        let iu = i as usize;
        let shift = (-big_m) as usize;
        let v = t.v_prefix(iu + shift + 1);
        let noise = t.v_noise_prefix(iu + shift + 1);
        for n in 0..=iu {
            let w = gamma_over_factorials(sigma + i as f64, n, iu - n)? * alt(n as i64);
            let hh = h(n as f64, iu - n, sigma)?;
            out.log_part -= v[n + shift] * w;
            out.regular_part += v[n + shift] * (w * hh);
            mass += (v[n + shift] * w).norm() * (1.0 + hh.abs());
            out.err += noise[n + shift] * w.abs() * (1.0 + hh.abs());
        }
        let kernel = Kernel::new(Complex64::new(mf - i as f64, 0.0), Complex64::new(mf + 1.0, 0.0), iu + 1 + shift);
        let s = kernel_sum(t, &kernel, tol, DEFAULT_MAX_N)?;
        let g = gamma(Complex64::new(sigma + i as f64, 0.0))?.re * alt(i + 1);
        out.regular_part -= s.value * g;
        out.err += s.err * g.abs();
    }
    out.err += 4.0 * f64::EPSILON * mass;
    Ok(out)
}

/// Root-test probe of the radius of convergence of `Σ W_m (1-z)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusProbe {
    /// `exp(-slope)` of a least-squares line through `ln |W_m|` over the
    /// upper half of the reliable indices
    pub estimate: f64,
    /// plain Cauchy root `|W_M|^{-1/M}` at the last reliable index
    pub root: f64,
    pub last_reliable: usize,
    pub coefficients: Vec<Estimate>,
}

/// Computes `W_0..=W_{m_max}` best-effort and estimates their radius from the
/// coefficients whose error estimate is below `reliable` relative. `W_m` is an
/// `m`-th difference of `V_n` at heart, so roughly `2^m ε` of it is lost to
/// rounding and the reliable range ends well before `m = 60` in double
/// precision.
pub fn w_radius_probe(ps: &ParameterSet, sigma: f64, m_max: usize, reliable: f64) -> Result<RadiusProbe> {
    non_integer_mu(ps)?;
    check_index(m_max)?;
    let t = v_table(ps, sigma, 0.0)?;
    let mut coefficients = Vec::with_capacity(m_max + 1);
    let mut last_reliable = 0;
    for m in 0..=m_max {
        let w = w_from_table(&t, m, 1e-12, DEFAULT_MAX_N)?;
        if w.err <= reliable * w.value.norm() && w.value.norm() > 0.0 && last_reliable + 1 >= m {
            last_reliable = m;
        }
        coefficients.push(w);
    }
    if last_reliable < 2 {
        return Err(FwxError::Tolerance {
            requested: reliable,
            achieved: coefficients[1].err / coefficients[1].value.norm().max(f64::MIN_POSITIVE),
            terms: 2,
        });
    }
    let root = coefficients[last_reliable].value.norm().powf(-1.0 / last_reliable as f64);
    let lo = (last_reliable / 2).max(1);
    let pts: Vec<(f64, f64)> = (lo..=last_reliable)
        .map(|m| (m as f64, coefficients[m].value.norm().ln()))
        .collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
    let estimate = if sxx > 0.0 { (-sxy / sxx).exp() } else { root };
    Ok(RadiusProbe {
        estimate,
        root,
        last_reliable,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: f64) -> f64 {
        crate::special::gamma_real(x).unwrap()
    }

    #[test]
    fn r0_reflects_to_nu_gamma() {
        let ps = ParameterSet::real(&[0.35, 0.6], &[0.5, 1.0], &[0.9], &[0.5]).unwrap();
        let r0 = coeff_r(&ps, 1.0, 0).unwrap().value;
        let want = ps.nu() * gamma(-ps.mu()).unwrap();
        assert!((r0 - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn gauss_connection_coefficients() {
        // R-part: Γ(c)Γ(a+b-c)/(Γ(a)Γ(b)) (1-z)^{c-a-b} 2F1(c-a, c-b; c-a-b+1; 1-z) times Γ(a)Γ(b)/Γ(c)
        let (a, b, c) = (0.3, 0.4, 1.5);
        let ps = ParameterSet::gauss(a, b, c).unwrap();
        let lam = c - a - b;
        let mut r = g(a + b - c);
        let mut w = g(a) * g(b) * g(lam) / (g(c - a) * g(c - b));
        for m in 0..6 {
            let got_r = coeff_r(&ps, 1.0, m).unwrap().value.re;
            let got_w = coeff_w(&ps, 1.0, m, 1e-10).unwrap().value.re;
            assert!((got_r - r).abs() < 1e-11 * r.abs(), "R_{m}: {got_r} vs {r}");
            assert!((got_w - w).abs() < 1e-10 * w.abs(), "W_{m}: {got_w} vs {w}");
            let mf = m as f64;
            r *= (c - a + mf) * (c - b + mf) / ((lam + 1.0 + mf) * (mf + 1.0));
            w *= (a + mf) * (b + mf) / ((1.0 - lam + mf) * (mf + 1.0));
        }
    }

    #[test]
    fn theta_invariance() {
        let ps = ParameterSet::real(&[0.35, 0.6], &[0.5, 1.0], &[0.9], &[0.5]).unwrap();
        for m in [0, 3, 7, 10] {
            let r0 = coeff_r(&ps, 1.0, m).unwrap().value;
            let w0 = coeff_w(&ps, 1.0, m, 1e-8).unwrap().value;
            for theta in [0.3, 1.0] {
                let r = coeff_r_theta(&ps, 1.0, theta, m).unwrap().value;
                let w = coeff_w_theta(&ps, 1.0, theta, m, 1e-8).unwrap().value;
                assert!((r - r0).norm() < 1e-9 * r0.norm(), "R_{m} theta={theta}");
                assert!((w - w0).norm() < 1e-9 * w0.norm(), "W_{m} theta={theta}: {w} {w0}");
            }
        }
    }

    #[test]
    fn zero_balanced_log_coefficients() {
        let ps = ParameterSet::gauss(0.5, 0.5, 1.0).unwrap();
        let c = log_case_coeffs(&ps, 1.0, 0, 1e-12).unwrap();
        let v0 = v_n(&ps, 1.0, 0.0, 0).unwrap();
        assert!((c.log_part + v0).norm() < 1e-13, "{} {}", c.log_part, v0);
        // Σ V_n/n = 4 ln 2 for this set
        assert!((c.regular_part.re - 4.0 * 2f64.ln()).abs() < 1e-11, "{}", c.regular_part);
    }

    #[test]
    fn h_series_vanishes_at_one() {
        let ps = ParameterSet::gauss(0.3, 0.4, 1.5).unwrap(); // μσ = 1.8
        let h = h_series(&ps, 1.0, 0.0, Complex64::new(1.0, 0.0), 1e-10).unwrap();
        assert_eq!(h.value, ZERO);
    }

    #[test]
    fn h_series_theta_independent() {
        let ps = ParameterSet::real(&[0.35, 0.6], &[0.5, 1.0], &[0.9], &[0.5]).unwrap();
        let t = Complex64::new(0.6, 0.0);
        let h0 = h_series(&ps, 1.0, 0.0, t, 1e-12).unwrap().value;
        let h1 = h_series(&ps, 1.0, 0.7, t, 1e-12).unwrap().value;
        assert!((h0 - h1).norm() < 1e-9 * h0.norm());
    }

    #[test]
    fn errors() {
        let ps = ParameterSet::gauss(0.5, 0.5, 1.0).unwrap();
        assert!(matches!(coeff_r(&ps, 1.0, 0), Err(FwxError::IntegerMu { .. })));
        assert!(matches!(q_m(&ps, 1.0, 0), Err(FwxError::Index(_))));
        let ps = ParameterSet::gauss(0.3, 0.4, 1.5).unwrap();
        assert!(matches!(
            h_series(&ps, 1.0, 0.0, Complex64::new(-0.5, 0.0), 1e-10),
            Err(FwxError::Domain(_))
        ));
    }
}
