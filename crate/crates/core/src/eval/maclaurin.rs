use num_complex::Complex64;

use super::{EvalOptions, EvalResult, Representation};
use crate::error::{FwxError, Result};
use crate::params::ParameterSet;
use crate::special::{log_gamma, log_gamma_any, nearest_pole};

/// Relative slack on `|z| = ρ` for the boundary case.
const BOUNDARY_SLACK: f64 = 1e-12;
const WINDOW: usize = 16;

/// `ln` of the `n`-th Maclaurin term without the `z^n` factor; `None` when a
/// lower gamma has a pole and the term vanishes.
fn ln_coeff(ps: &ParameterSet, n: usize) -> Result<Option<Complex64>> {
    let nf = n as f64;
    let mut acc = -log_gamma(Complex64::new(nf + 1.0, 0.0))?;
    for (a, s) in ps.a().iter().zip(ps.big_a()) {
        acc += log_gamma(a + s * nf)?;
    }
    for (b, s) in ps.b().iter().zip(ps.big_b()) {
        let x = b + s * nf;
        if nearest_pole(x).is_some() {
            return Ok(None);
        }
        acc -= log_gamma_any(x)?;
    }
    Ok(Some(acc))
}

/// Defining power series, for `|z| < ρ` and on `|z| = ρ` when `Re μ > 0`.
pub fn eval_maclaurin(ps: &ParameterSet, z: Complex64, opts: &EvalOptions) -> Result<EvalResult> {
    opts.validate()?;
    let rho = ps.rho();
    let r = z.norm() / rho;
    if !(r.is_finite()) || r > 1.0 + BOUNDARY_SLACK || (r >= 1.0 - BOUNDARY_SLACK && ps.mu().re <= 0.0) {
        return Err(FwxError::Domain(format!(
            "|z|/rho = {r} is outside the disk of convergence (Re mu = {})",
            ps.mu().re
        )));
    }
    let lz = if z == Complex64::new(0.0, 0.0) { None } else { Some(z.ln()) };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    let mut mags: Vec<f64> = Vec::new();
    for n in 0..opts.max_terms {
        let term = match (ln_coeff(ps, n)?, lz) {
            (None, _) => Complex64::new(0.0, 0.0),
            (Some(c), _) if n == 0 => c.exp(),
            (Some(_), None) => Complex64::new(0.0, 0.0),
            (Some(c), Some(l)) => (c + l * n as f64).exp(),
        };
        sum += term;
        mass += term.norm();
        mags.push(term.norm());
        if lz.is_none() {
            return Ok(done(sum, 1, 0.0, mass));
        }
        if n + 1 >= 2 * WINDOW {
            let tail = remainder(&mags, r);
            if tail <= opts.tol * sum.norm() {
                return Ok(done(sum, n + 1, tail, mass));
            }
        }
    }
    let tail = remainder(&mags, r);
    Err(FwxError::Tolerance {
        requested: opts.tol,
        achieved: tail / sum.norm().max(f64::MIN_POSITIVE),
        terms: opts.max_terms,
    })
}

fn done(value: Complex64, terms: usize, tail: f64, mass: f64) -> EvalResult {
    EvalResult {
        value,
        representation: Representation::Maclaurin,
        terms_used: terms,
        err_estimate: tail + 4.0 * f64::EPSILON * mass,
        warnings: Vec::new(),
    }
}

/// Remainder after the terms in `mags`, whose ratio tends to `r = |z|/ρ` with
/// an algebraic factor `n^{-p}`; the smaller of the geometric and power-law
/// bounds applies.
fn remainder(mags: &[f64], r: f64) -> f64 {
    let n = mags.len();
    let window = &mags[n - WINDOW..];
    let env = window.iter().copied().fold(0.0, f64::max);
    if env == 0.0 {
        return 0.0;
    }
    let first = window.iter().position(|&m| m > 0.0).unwrap_or(0);
    let (a, b) = (window[first], window[WINDOW - 1]);
    let steps = (WINDOW - 1 - first) as f64;
    let q = if a > 0.0 && b > 0.0 && steps > 0.0 {
        (b / a).powf(1.0 / steps)
    } else {
        1.0
    };
    // terms still growing: no estimate yet
    if q > 1.0 + 1e-12 && r < 1.0 - 1e-9 {
        return f64::INFINITY;
    }
    let q = q.max(r);
    let geometric = if q < 1.0 { env * q / (1.0 - q) } else { f64::INFINITY };
    let n0 = (n - WINDOW + first) as f64;
    let n1 = (n - 1) as f64;
    let power = if a > 0.0 && b > 0.0 && n1 > n0 {
        let p = -(b / a).ln() / (n1 / n0).ln();
        if p > 1.05 {
            2.0 * env * n1 / (p - 1.0)
        } else {
            f64::INFINITY
        }
    } else {
        f64::INFINITY
    };
    geometric.min(power)
}
