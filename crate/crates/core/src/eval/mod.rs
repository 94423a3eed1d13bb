//! Region-dispatched evaluation of `Ψ(z)` and of its branch-cut data.
//!
//! All entry points except [`eval_singular_expansion`] take the unscaled
//! argument `z`; the singular expansion is written in `ζ = z/ρ`.

mod maclaurin;
mod residue;
mod singular;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{FwxError, Result};
use crate::params::ParameterSet;

pub use maclaurin::eval_maclaurin;
pub use residue::{average_on_cut, cut_values, eval_residue_series, jump_on_cut};
pub use singular::{eval_at_rho, eval_singular_expansion};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_TERMS: usize = 100_000;

/// `|μ - round(μ)|` below which a warning about `sin(πμ)` cancellation is attached.
pub const NEAR_INTEGER_MU_WARN: f64 = 1e-4;

/// Region thresholds of [`eval_auto`], in units of `ρ`.
pub const SINGULAR_RADIUS: f64 = 0.4;
pub const MACLAURIN_RADIUS: f64 = 0.95;
pub const RESIDUE_RADIUS: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// relative truncation tolerance
    pub tol: f64,
    /// cap on the terms of any single series
    pub max_terms: usize,
    /// `σ` of the singular machinery; `None` lets the evaluator pick one
    /// (see [`ParameterSet::expansion_sigma`])
    pub sigma: Option<f64>,
    pub theta: f64,
}

impl Default for EvalOptions {
    /// Honors `FWX_MAX_TERMS` when it holds a positive integer.
    fn default() -> Self {
        let max_terms = std::env::var("FWX_MAX_TERMS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_MAX_TERMS);
        Self {
            tol: DEFAULT_TOL,
            max_terms,
            sigma: None,
            theta: 0.0,
        }
    }
}

impl EvalOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = Some(sigma);
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(FwxError::Domain(format!("tolerance {} must be positive", self.tol)));
        }
        if self.max_terms == 0 {
            return Err(FwxError::Domain("max_terms must be positive".into()));
        }
        if !self.theta.is_finite() {
            return Err(FwxError::Domain("theta must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    Maclaurin,
    Residue,
    Singular,
    SingularLog,
    AtRho,
}

impl Representation {
    pub fn as_str(self) -> &'static str {
        match self {
            Representation::Maclaurin => "maclaurin",
            Representation::Residue => "residue",
            Representation::Singular => "singular",
            Representation::SingularLog => "singular-log",
            Representation::AtRho => "at-rho",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Representation {
    type Err = FwxError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "maclaurin" => Representation::Maclaurin,
            "residue" => Representation::Residue,
            "singular" => Representation::Singular,
            "singular-log" => Representation::SingularLog,
            "at-rho" => Representation::AtRho,
            _ => return Err(FwxError::Parse(format!("unknown representation '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub representation: Representation,
    pub terms_used: usize,
    /// absolute error estimate: truncation plus propagated rounding
    pub err_estimate: f64,
    pub warnings: Vec<String>,
}

/// Both bank combinations at a point `x > ρ` of the cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutValues {
    pub x: f64,
    /// `Ψ(x + i0) - Ψ(x - i0)`
    pub jump: Complex64,
    /// `(Ψ(x + i0) + Ψ(x - i0))/2`
    pub average: Complex64,
    pub err_estimate: f64,
}

/// `true` for `z` on `[ρ, ∞)`.
pub fn on_cut(ps: &ParameterSet, z: Complex64) -> bool {
    z.im == 0.0 && z.re >= ps.rho()
}

/// Sum `Σ t_m` of a series whose terms shrink at a roughly geometric rate,
/// stopped on the empirical ratio of recent terms.
pub(crate) struct RatioTail {
    mags: Vec<f64>,
    floor: f64,
}

impl RatioTail {
    /// `floor` is a lower bound on the eventual ratio.
    pub(crate) fn new(floor: f64) -> Self {
        Self { mags: Vec::new(), floor }
    }

    pub(crate) fn push(&mut self, mag: f64) {
        self.mags.push(mag);
    }

    /// Estimated remainder after the terms pushed so far.
    pub(crate) fn remainder(&self) -> f64 {
        const SPAN: usize = 4;
        let n = self.mags.len();
        if n <= SPAN {
            return f64::INFINITY;
        }
        let last = self.mags[n - 1];
        let window = &self.mags[n - SPAN - 1..];
        if window.iter().all(|&m| m == 0.0) {
            return 0.0;
        }
        let back = window[0];
        let ratio = if back > 0.0 { (last / back).powf(1.0 / SPAN as f64) } else { 1.0 };
        let q = ratio.max(self.floor);
        if q >= 1.0 {
            return f64::INFINITY;
        }
        // the envelope of recent terms carried forward at rate q, not the last
        // term alone, guards against oscillating magnitudes
        let envelope = window
            .iter()
            .rev()
            .enumerate()
            .map(|(k, &m)| m * q.powi(k as i32))
            .fold(0.0, f64::max);
        envelope * q / (1.0 - q)
    }
}

/// Picks a representation by region and evaluates `Ψ(z)`.
pub fn eval_auto(ps: &ParameterSet, z: Complex64, opts: &EvalOptions) -> Result<EvalResult> {
    opts.validate()?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(FwxError::Domain(format!("z = {z} is not finite")));
    }
    if on_cut(ps, z) {
        return Err(FwxError::Cut(z));
    }
    let zeta = z / ps.rho();
    let dist = (Complex64::new(1.0, 0.0) - zeta).norm();
    let r = zeta.norm();
    if dist < SINGULAR_RADIUS {
        return eval_singular_expansion(ps, zeta, opts);
    }
    if r < MACLAURIN_RADIUS {
        return eval_maclaurin(ps, z, opts);
    }
    if r > RESIDUE_RADIUS {
        return eval_residue_series(ps, z, opts);
    }
    let inside = if r <= 1.0 { Some(eval_maclaurin(ps, z, opts)) } else { None };
    let outside = if r >= 1.0 { Some(eval_residue_series(ps, z, opts)) } else { None };
    match (inside, outside) {
        (Some(Ok(a)), Some(Ok(b))) => {
            let diff = (a.value - b.value).norm();
            let mut warnings = a.warnings;
            warnings.extend(b.warnings);
            Ok(EvalResult {
                value: (a.value + b.value) * 0.5,
                representation: a.representation,
                terms_used: a.terms_used + b.terms_used,
                err_estimate: a.err_estimate.max(b.err_estimate).max(diff / 2.0),
                warnings,
            })
        }
        (Some(Ok(a)), _) => Ok(a),
        (_, Some(Ok(b))) => Ok(b),
        (Some(Err(e)), _) | (_, Some(Err(e))) => Err(e),
        (None, None) => unreachable!("|z| is either <= rho or >= rho"),
    }
}

/// Evaluates with an explicitly requested representation.
pub fn eval_with(ps: &ParameterSet, z: Complex64, rep: Option<Representation>, opts: &EvalOptions) -> Result<EvalResult> {
    match rep {
        None => eval_auto(ps, z, opts),
        Some(Representation::Maclaurin) => eval_maclaurin(ps, z, opts),
        Some(Representation::Residue) => eval_residue_series(ps, z, opts),
        Some(Representation::Singular) | Some(Representation::SingularLog) => {
            eval_singular_expansion(ps, z / ps.rho(), opts)
        }
        Some(Representation::AtRho) => eval_at_rho(ps, opts),
    }
}
