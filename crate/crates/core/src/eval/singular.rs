use num_complex::Complex64;

use super::{EvalOptions, EvalResult, RatioTail, Representation, NEAR_INTEGER_MU_WARN};
use crate::engine::{at_rho_sum, log_from_table, r_from_table, w_from_table, MAX_COEFF_INDEX};
use crate::engine::tail::DEFAULT_MAX_N;
use crate::error::{FwxError, Result};
use crate::params::ParameterSet;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Radius in `1 - ζ` inside which the expansion is used.
pub const SINGULAR_LIMIT: f64 = 0.5;

/// Per-coefficient tolerance relative to the requested one; the coefficient
/// errors add up over a few dozen terms at most.
const COEFF_TOL_SHARE: f64 = 0.05;

fn precheck(ps: &ParameterSet, zeta: Complex64, opts: &EvalOptions) -> Result<(Complex64, f64)> {
    opts.validate()?;
    if !(zeta.re.is_finite() && zeta.im.is_finite()) {
        return Err(FwxError::Domain(format!("z = {zeta} is not finite")));
    }
    ps.check_scales()?;
    if zeta.im == 0.0 && zeta.re > 1.0 {
        return Err(FwxError::Cut(zeta * ps.rho()));
    }
    let w = Complex64::new(1.0, 0.0) - zeta;
    if !(w.norm() < SINGULAR_LIMIT) {
        return Err(FwxError::Domain(format!(
            "|1 - z/rho| = {} must be below {SINGULAR_LIMIT}",
            w.norm()
        )));
    }
    let sigma = match opts.sigma {
        Some(_) => ps.choose_sigma(opts.sigma)?,
        None => ps.expansion_sigma(),
    };
    Ok((w, sigma))
}

/// `Ψ(ρζ)` from the expansion about the singular point, `|1 - ζ| < 1/2`.
///
/// Non-integer `μ`: `(1-ζ)^μ Σ R_m (1-ζ)^m + Σ W_m (1-ζ)^m`.
/// Integer `μ = M`: `Σ_{i ≥ min(M,0)} (1-ζ)^i (λ_i log(1-ζ) + κ_i)`.
///
/// The truncation error is held below `tol`; coefficient rounding, which can
/// dominate when `R_m` and `W_m` cancel, is reported in `err_estimate` only.
pub fn eval_singular_expansion(ps: &ParameterSet, zeta: Complex64, opts: &EvalOptions) -> Result<EvalResult> {
    let (w, sigma) = precheck(ps, zeta, opts)?;
    match ps.integer_mu() {
        Some(m) => log_form(ps, w, m, sigma, opts),
        None => power_form(ps, w, sigma, opts),
    }
}

fn power_form(ps: &ParameterSet, w: Complex64, sigma: f64, opts: &EvalOptions) -> Result<EvalResult> {
    let t = ps.table(sigma, opts.theta)?;
    let mu = ps.mu();
    let mut warnings = Vec::new();
    let dist = (mu - mu.re.round()).norm();
    if dist < NEAR_INTEGER_MU_WARN {
        warnings.push(format!(
            "mu = {mu} is within {dist:.1e} of an integer; R_m and W_m cancel strongly"
        ));
    }
    let coeff_tol = opts.tol * COEFF_TOL_SHARE;
    let r = w.norm();
    if r == 0.0 {
        if mu.re <= 0.0 {
            return Err(FwxError::Domain(format!("the function is singular at z = rho (Re mu = {})", mu.re)));
        }
        let w0 = w_from_table(&t, 0, coeff_tol, DEFAULT_MAX_N)?;
        return Ok(EvalResult {
            value: w0.value,
            representation: Representation::Singular,
            terms_used: 1,
            err_estimate: w0.err,
            warnings,
        });
    }
    let wmu = w.powc(mu);
    let mut r_part = Part::new(r);
    let mut w_part = Part::new(r);
    let mut err = 0.0;
    let mut wpow = Complex64::new(1.0, 0.0);
    for m in 0..=MAX_COEFF_INDEX {
        if r_part.open() {
            let rm = r_from_table(&t, m);
            err += r_part.push(m, rm.value, rm.err, wmu * wpow);
        }
        if w_part.open() {
            let wm = w_from_table(&t, m, coeff_tol, DEFAULT_MAX_N)?;
            err += w_part.push(m, wm.value, wm.err, wpow);
        }
        let total = r_part.sum + w_part.sum;
        if !total.is_finite() {
            return Err(FwxError::Domain(format!("singular expansion overflowed at m = {m}")));
        }
        let trunc = r_part.remainder() + w_part.remainder();
        if m >= 4 && trunc <= opts.tol * total.norm() {
            if r_part.frozen.is_some() || w_part.frozen.is_some() {
                warnings.push(format!("coefficients beyond m = {m} are rounding noise; tail extrapolated"));
            }
            return Ok(EvalResult {
                value: total,
                representation: Representation::Singular,
                terms_used: m + 1,
                err_estimate: err + trunc,
                warnings,
            });
        }
        if !r_part.open() && !w_part.open() {
            return Err(FwxError::Tolerance {
                requested: opts.tol,
                achieved: trunc / total.norm().max(f64::MIN_POSITIVE),
                terms: m + 1,
            });
        }
        wpow *= w;
    }
    let total = r_part.sum + w_part.sum;
    Err(FwxError::Tolerance {
        requested: opts.tol,
        achieved: (r_part.remainder() + w_part.remainder()) / total.norm().max(f64::MIN_POSITIVE),
        terms: MAX_COEFF_INDEX + 1,
    })
}

/// One of the two power series of the expansion. Both `R_m` and `W_m` lose
/// accuracy with `m` through cancellation; once a coefficient keeps less
/// than one bit the series is closed and its tail extrapolated from the
/// clean terms.
struct Part {
    sum: Complex64,
    tail: RatioTail,
    /// tail bound fixed when the series was closed
    frozen: Option<f64>,
}

impl Part {
    fn new(r: f64) -> Self {
        Self {
            sum: ZERO,
            tail: RatioTail::new(r),
            frozen: None,
        }
    }

    fn open(&self) -> bool {
        self.frozen.is_none()
    }

    /// Adds `c·factor`; returns the rounding error contributed.
    fn push(&mut self, m: usize, c: Complex64, c_err: f64, factor: Complex64) -> f64 {
        let scale = factor.norm();
        if m >= 4 && 2.0 * c_err >= c.norm() {
            // the true terms follow the geometric trend of the clean ones
            self.frozen = Some(self.tail.remainder());
            return 0.0;
        }
        self.sum += c * factor;
        self.tail.push(c.norm() * scale);
        scale * c_err
    }

    fn remainder(&self) -> f64 {
        self.frozen.unwrap_or_else(|| self.tail.remainder())
    }
}

fn log_form(ps: &ParameterSet, w: Complex64, big_m: i64, sigma: f64, opts: &EvalOptions) -> Result<EvalResult> {
    if big_m < 0 && sigma <= -(big_m as f64) {
        return Err(FwxError::Sigma(format!("mu = {big_m} requires sigma > {}", -big_m)));
    }
    let t = ps.table(sigma, 0.0)?;
    let mut warnings = Vec::new();
    if opts.theta != 0.0 {
        warnings.push("theta is ignored for integer mu".to_string());
    }
    let off = (ps.mu() - big_m as f64).norm();
    if off > 0.0 {
        warnings.push(format!("mu treated as the integer {big_m} (off by {off:.1e})"));
    }
    let coeff_tol = opts.tol * COEFF_TOL_SHARE;
    let start = big_m.min(0);
    let r = w.norm();
    if r == 0.0 {
        if big_m <= 0 {
            return Err(FwxError::Domain(format!("the function is singular at z = rho (mu = {big_m})")));
        }
        let c = log_from_table(&t, big_m, 0, coeff_tol)?;
        return Ok(EvalResult {
            value: c.regular_part,
            representation: Representation::SingularLog,
            terms_used: 1,
            err_estimate: c.err,
            warnings,
        });
    }
    let lw = w.ln();
    let mut sum = ZERO;
    let mut tail = RatioTail::new(r);
    let mut err = 0.0;
    let mut wpow = w.powi(start as i32);
    for (count, i) in (start..=MAX_COEFF_INDEX as i64).enumerate() {
        let c = log_from_table(&t, big_m, i, coeff_tol)?;
        let term = (c.log_part * lw + c.regular_part) * wpow;
        sum += term;
        tail.push(term.norm());
        err += wpow.norm() * c.err * (1.0 + lw.norm());
        let trunc = tail.remainder();
        if count >= 4 && i >= 1 && trunc <= opts.tol * sum.norm() {
            return Ok(EvalResult {
                value: sum,
                representation: Representation::SingularLog,
                terms_used: count + 1,
                err_estimate: err + trunc,
                warnings,
            });
        }
        wpow *= w;
    }
    Err(FwxError::Tolerance {
        requested: opts.tol,
        achieved: tail.remainder() / sum.norm().max(f64::MIN_POSITIVE),
        terms: (MAX_COEFF_INDEX as i64 - start + 1) as usize,
    })
}

/// `Ψ(ρ)` through `Γ(σ) Σ_n V_n/(μ + n)`; for `Re μ <= 0` this is the
/// continuation in the parameters, not a limit of the function.
pub fn eval_at_rho(ps: &ParameterSet, opts: &EvalOptions) -> Result<EvalResult> {
    opts.validate()?;
    ps.check_scales()?;
    // the value does not depend on σ, but the rounding in V_n does; without
    // a requested σ a few are tried and the best certified one kept
    let candidates: Vec<f64> = match opts.sigma {
        Some(_) => vec![ps.choose_sigma(opts.sigma)?],
        None => (0..3).map(|k| ps.expansion_sigma() + k as f64).collect(),
    };
    let mut best: Option<crate::engine::Estimate> = None;
    for sigma in candidates {
        let e = at_rho_sum(ps, sigma, opts.tol)?;
        let done = e.err <= opts.tol * e.value.norm();
        if best.is_none_or(|b| e.err < b.err) {
            best = Some(e);
        }
        if done {
            break;
        }
    }
    let e = best.expect("at least one sigma");
    if e.err > opts.tol * e.value.norm() {
        return Err(FwxError::Tolerance {
            requested: opts.tol,
            achieved: e.err / e.value.norm().max(f64::MIN_POSITIVE),
            terms: e.terms,
        });
    }
    let mut warnings = Vec::new();
    if ps.mu().re <= 0.0 {
        warnings.push("Re mu <= 0: value is the continuation in the parameters".to_string());
    }
    Ok(EvalResult {
        value: e.value,
        representation: Representation::AtRho,
        terms_used: e.terms,
        err_estimate: e.err,
        warnings,
    })
}
