//! Validated Fox-Wright parameters and the scalars derived from them.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::engine::CoefficientTable;
use crate::error::{FwxError, Result};

/// Tolerance on `Δ + 1`.
pub const DELTA_TOL: f64 = 1e-12;
/// Distance from an integer below which `μ` selects the logarithmic expansions.
pub const INTEGER_MU_TOL: f64 = 1e-8;
/// Smallest admissible scale for the near-singularity expansions.
pub const MIN_SCALE: f64 = 1.0 / 6.0;

/// Quantities that depend only on the parameter lists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScalars {
    pub delta: f64,
    pub rho: f64,
    pub mu: Complex64,
    pub nu: Complex64,
    pub alpha: f64,
}

type TableKey = (u64, u64);

/// `(a, A; b, B)` with `Δ = -1` and `α > 0` enforced.
///
/// Cloning is cheap and clones share the coefficient cache.
#[derive(Clone)]
pub struct ParameterSet {
    a: Vec<Complex64>,
    big_a: Vec<f64>,
    b: Vec<Complex64>,
    big_b: Vec<f64>,
    derived: DerivedScalars,
    tables: Arc<RwLock<HashMap<TableKey, Arc<CoefficientTable>>>>,
}

impl fmt::Debug for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParameterSet")
            .field("a", &self.a)
            .field("A", &self.big_a)
            .field("b", &self.b)
            .field("B", &self.big_b)
            .field("derived", &self.derived)
            .finish()
    }
}

impl PartialEq for ParameterSet {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.big_a == other.big_a && self.b == other.b && self.big_b == other.big_b
    }
}

impl ParameterSet {
    /// Checks shapes, positivity of the scales, `Δ = -1` and `α > 0`.
    pub fn new(a: Vec<Complex64>, big_a: Vec<f64>, b: Vec<Complex64>, big_b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(FwxError::Shape("at least one upper parameter is required".into()));
        }
        if a.len() != big_a.len() {
            return Err(FwxError::Shape(format!("{} values of a but {} of A", a.len(), big_a.len())));
        }
        if b.len() != big_b.len() {
            return Err(FwxError::Shape(format!("{} values of b but {} of B", b.len(), big_b.len())));
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !a.iter().chain(b.iter()).all(finite) {
            return Err(FwxError::Domain("parameters must be finite".into()));
        }
        if let Some(s) = big_a.iter().chain(big_b.iter()).find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(FwxError::Domain(format!("scale {s} is not a positive real")));
        }
        let delta = big_b.iter().sum::<f64>() - big_a.iter().sum::<f64>();
        if (delta + 1.0).abs() > DELTA_TOL {
            return Err(FwxError::Delta { delta });
        }
        let alpha = a
            .iter()
            .zip(&big_a)
            .map(|(ak, sk)| ak.re / sk)
            .fold(f64::INFINITY, f64::min);
        if alpha <= 0.0 {
            return Err(FwxError::Domain(format!("alpha = min Re(a_k/A_k) = {alpha} must be positive")));
        }

        let p = a.len() as f64;
        let q = b.len() as f64;
        let ln_rho = -big_a.iter().map(|s| s * s.ln()).sum::<f64>() + big_b.iter().map(|s| s * s.ln()).sum::<f64>();
        let mu = b.iter().sum::<Complex64>() - a.iter().sum::<Complex64>() + (p - q - 1.0) / 2.0;
        let ln_nu = (2.0 * PI).ln() * (p - q - 1.0) / 2.0
            + a.iter().zip(&big_a).map(|(ak, sk)| (ak - 0.5) * sk.ln()).sum::<Complex64>()
            + b.iter().zip(&big_b).map(|(bj, sj)| (0.5 - bj) * sj.ln()).sum::<Complex64>();
        let derived = DerivedScalars {
            delta,
            rho: ln_rho.exp(),
            mu,
            nu: ln_nu.exp(),
            alpha,
        };
        Ok(Self {
            a,
            big_a,
            b,
            big_b,
            derived,
            tables: Arc::new(RwLock::new(HashMap::new())),
        })
    }

    /// Real parameters given as slices.
    pub fn real(a: &[f64], big_a: &[f64], b: &[f64], big_b: &[f64]) -> Result<Self> {
        let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(c(a), big_a.to_vec(), c(b), big_b.to_vec())
    }

    /// Unit scales with upper `(a, b)` and lower `c`: the Gauss `₂F₁` case.
    pub fn gauss(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::real(&[a, b], &[1.0, 1.0], &[c], &[1.0])
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }
    pub fn big_a(&self) -> &[f64] {
        &self.big_a
    }
    pub fn b(&self) -> &[Complex64] {
        &self.b
    }
    pub fn big_b(&self) -> &[f64] {
        &self.big_b
    }
    pub fn p(&self) -> usize {
        self.a.len()
    }
    pub fn q(&self) -> usize {
        self.b.len()
    }
    pub fn derived(&self) -> DerivedScalars {
        self.derived
    }
    pub fn delta(&self) -> f64 {
        self.derived.delta
    }
    pub fn rho(&self) -> f64 {
        self.derived.rho
    }
    pub fn mu(&self) -> Complex64 {
        self.derived.mu
    }
    pub fn mu_sigma(&self, sigma: f64) -> Complex64 {
        self.derived.mu + sigma
    }
    pub fn nu(&self) -> Complex64 {
        self.derived.nu
    }
    pub fn alpha(&self) -> f64 {
        self.derived.alpha
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|z| z.im == 0.0)
    }

    pub fn min_scale(&self) -> f64 {
        self.big_a.iter().chain(self.big_b.iter()).copied().fold(f64::INFINITY, f64::min)
    }

    /// Fails with [`FwxError::Scale`] unless every scale exceeds 1/6.
    pub fn check_scales(&self) -> Result<()> {
        let s = self.min_scale();
        if s <= MIN_SCALE {
            return Err(FwxError::Scale { scale: s });
        }
        Ok(())
    }

    /// `Some(k)` when `μ` is within [`INTEGER_MU_TOL`] of the integer `k`.
    pub fn integer_mu(&self) -> Option<i64> {
        let mu = self.derived.mu;
        let k = mu.re.round();
        if (mu - k).norm() < INTEGER_MU_TOL {
            Some(k as i64)
        } else {
            None
        }
    }

    /// Requested `σ` if admissible, otherwise the default `max(1, ⌈-Re μ⌉ + 1)`.
    pub fn choose_sigma(&self, requested: Option<f64>) -> Result<f64> {
        let re_mu = self.derived.mu.re;
        match requested {
            Some(s) if !(s.is_finite() && s > 0.0) => Err(FwxError::Sigma(format!("sigma = {s} must be positive"))),
            Some(s) if re_mu + s <= 0.0 => Err(FwxError::Sigma(format!(
                "Re(mu + sigma) = {} must be positive",
                re_mu + s
            ))),
            Some(s) => Ok(s),
            None => Ok(1f64.max((-re_mu).ceil() + 1.0)),
        }
    }

    /// `σ` for quantities that do not depend on it (`R_m`, `W_m`, the value
    /// at `ρ`): the smallest integer `σ >= 1` with `Re μσ >= 1/2`. Larger `σ`
    /// makes the sums behind these coefficients cancel more.
    pub fn expansion_sigma(&self) -> f64 {
        1f64.max((0.5 - self.derived.mu.re).ceil())
    }

    /// Shared coefficient table for `(σ, θ)`, created on first use.
    ///
    /// Only `σ > 0` is checked here; `q_m` and `l_r` need nothing more, and
    /// operations that use `V_n` go through [`ParameterSet::choose_sigma`].
    pub fn table(&self, sigma: f64, theta: f64) -> Result<Arc<CoefficientTable>> {
        if !(sigma.is_finite() && sigma > 0.0) || !theta.is_finite() {
            return Err(FwxError::Sigma(format!("sigma = {sigma}, theta = {theta} must be finite with sigma > 0")));
        }
        let key = (sigma.to_bits(), theta.to_bits());
        if let Some(t) = self.tables.read().expect("table cache poisoned").get(&key) {
            return Ok(Arc::clone(t));
        }
        let mut map = self.tables.write().expect("table cache poisoned");
        let t = map
            .entry(key)
            .or_insert_with(|| Arc::new(CoefficientTable::new(self, sigma, theta)));
        Ok(Arc::clone(t))
    }
}

fn is_decimal(s: &str) -> bool {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|c| c.is_ascii_digit());
    match s.split_once('.') {
        Some((i, f)) => digits(i) && digits(f),
        None => digits(s),
    }
}

/// Parses `[-]ddd[.ddd][(+|-)ddd[.ddd]i]`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let err = || FwxError::Parse(format!("invalid complex literal {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let sign = if neg { -1.0 } else { 1.0 };
    if let Some(stem) = body.strip_suffix('i') {
        let split = stem.rfind(['+', '-']).ok_or_else(err)?;
        let (re, im) = stem.split_at(split);
        let im_sign = if im.starts_with('-') { -1.0 } else { 1.0 };
        let im = &im[1..];
        if !is_decimal(re) || !is_decimal(im) {
            return Err(err());
        }
        let re: f64 = re.parse().map_err(|_| err())?;
        let im: f64 = im.parse().map_err(|_| err())?;
        return Ok(Complex64::new(sign * re, im_sign * im));
    }
    if !is_decimal(body) {
        return Err(err());
    }
    Ok(Complex64::new(sign * body.parse::<f64>().map_err(|_| err())?, 0.0))
}

/// Comma-separated complex literals; the empty string is the empty list.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_complex).collect()
}

/// Comma-separated real literals.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    parse_complex_list(s)?
        .into_iter()
        .map(|z| {
            if z.im == 0.0 {
                Ok(z.re)
            } else {
                Err(FwxError::Parse(format!("expected a real value, got {z}")))
            }
        })
        .collect()
}
