//! Asymptotic model of `V_n` and accelerated kernel sums `Σ V_n g(n)`.
//!
//! `Σ V_n (1-t)^n` equals `t^{-θ-1} (1-t)^{1-μσ} H(t/ρ)`, and the small-`t`
//! expansion of `H` comes from the residues of its Mellin-Barnes integrand at
//! `s = -u`, `u = (a_k + j)/A_k`. Each residue contributes `K t^{e}`, and
//! `t^e = Σ_n φ_e(n) (1-t)^n` with `φ_e(n) = (-e)_n/n!`, so `V_n` is matched by
//! a finite combination of `φ_e(n)` up to `O(n^{-emax-1})`. Coincident poles
//! are handled with Laurent jets in a shift `ε`.
//!
//! Sums of the model against `g(n) = Γ(c+n)/Γ(d+n)` have closed forms, so a
//! kernel sum becomes a rapidly convergent remainder plus exact model parts.

use num_complex::Complex64;

use super::jet::{exp_jet, gamma_jet, rgamma_jet, Jet};
use super::CoefficientTable;
use crate::error::{FwxError, Result};
use crate::special::{digamma, gamma, nearest_pole, rgamma};

/// Orders `emax` of the tail models tried by kernel sums, cheapest first.
/// Lower orders need more `V_n` but cancel less against kernels with large
/// shifts.
pub const MODEL_ORDERS: [f64; 2] = [8.0, 4.0];
/// Exponent differences below this are treated as coincident poles.
pub const CLUSTER_TOL: f64 = 1e-9;
/// Default cap on the number of `V_n` used by one kernel sum.
pub const DEFAULT_MAX_N: usize = 16384;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const FIT_WINDOW: usize = 20;

/// A group of upper-parameter poles `u = (a_k + j)/A_k` that coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleCluster {
    pub u: Complex64,
    /// `(parameter index k, shift j)` for each member
    pub members: Vec<(usize, usize)>,
}

impl PoleCluster {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// Poles with `Re u < re_max`, grouped by coincidence, ordered by `Re u`.
pub fn pole_clusters(a: &[Complex64], big_a: &[f64], re_max: f64) -> Vec<PoleCluster> {
    let mut poles: Vec<(Complex64, usize, usize)> = Vec::new();
    for (k, (ak, sk)) in a.iter().zip(big_a).enumerate() {
        let mut j = 0;
        loop {
            let u = (ak + j as f64) / sk;
            if u.re >= re_max {
                break;
            }
            poles.push((u, k, j));
            j += 1;
        }
    }
    poles.sort_by(|x, y| x.0.re.total_cmp(&y.0.re));
    let mut out: Vec<PoleCluster> = Vec::new();
    let mut used = vec![false; poles.len()];
    for i in 0..poles.len() {
        if used[i] {
            continue;
        }
        let mut cl = PoleCluster {
            u: poles[i].0,
            members: vec![(poles[i].1, poles[i].2)],
        };
        used[i] = true;
        for k in i + 1..poles.len() {
            if poles[k].0.re - poles[i].0.re > CLUSTER_TOL {
                break;
            }
            if !used[k] && (poles[k].0 - poles[i].0).norm() < CLUSTER_TOL {
                used[k] = true;
                cl.members.push((poles[k].1, poles[k].2));
            }
        }
        out.push(cl);
    }
    out
}

#[derive(Debug, Clone)]
struct ModelTerm {
    /// exponent `e` of `t^{e-ε}`
    e: Complex64,
    k: Jet,
}

/// Finite asymptotic model `M_n = Σ [ε^{-1}] K(ε) φ_{e-ε}(n)` of `V_n(θ)`.
#[derive(Debug, Clone)]
pub struct TailModel {
    terms: Vec<ModelTerm>,
    max_multiplicity: usize,
}

impl TailModel {
    /// `None` when some residue cannot be expanded (degenerate parameters).
    pub fn build(table: &CoefficientTable, emax: f64) -> Option<Self> {
        let (a, big_a) = table.upper();
        let (b, big_b) = table.lower();
        let theta = table.theta();
        let sigma = table.sigma();
        let mu_s = table.mu_sigma();
        let ln_rho = table.rho().ln();
        let mut terms = Vec::new();
        let mut max_mult = 1;
        for cl in pole_clusters(a, big_a, emax + theta + 1.0) {
            let r = cl.multiplicity();
            max_mult = max_mult.max(r);
            let len = r + 1;
            let u = cl.u;
            let mut l = exp_jet(-u * ln_rho, Complex64::new(ln_rho, 0.0), len);
            for (i, (ai, si)) in a.iter().zip(big_a).enumerate() {
                let x = match cl.members.iter().find(|m| m.0 == i) {
                    Some(&(_, j)) => Complex64::new(-(j as f64), 0.0),
                    None => ai - u * si,
                };
                l = mul_jet(&l, &gamma_jet(x, *si, len)?);
            }
            for (bj, sj) in b.iter().zip(big_b) {
                l = mul_jet(&l, &rgamma_jet(bj - u * sj, *sj, len)?);
            }
            l = mul_jet(&l, &rgamma_jet(Complex64::new(sigma, 0.0) - u, 1.0, len)?);
            if l.val >= 0 {
                continue;
            }
            let mut coef = ONE;
            for deg in 0.. {
                let e = u - theta - 1.0 + deg as f64;
                if e.re >= emax {
                    break;
                }
                if deg > 0 {
                    coef = coef * (mu_s - 1.0 + (deg - 1) as f64) / deg as f64;
                }
                terms.push(ModelTerm { e, k: l.scale(coef) });
            }
        }
        Some(Self {
            terms,
            max_multiplicity: max_mult,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest pole multiplicity seen while building the model.
    pub fn max_multiplicity(&self) -> usize {
        self.max_multiplicity
    }

    /// `M_0 .. M_{n-1}`.
    pub fn values(&self, n: usize) -> Vec<Complex64> {
        let mut out = vec![ZERO; n];
        for t in &self.terms {
            let len = t.k.len();
            let mut phi = Jet::constant(ONE, len);
            for (i, slot) in out.iter_mut().enumerate() {
                *slot += t.k.residue_of_product(&phi);
                // φ(i+1) = φ(i) (i - e + ε)/(i + 1)
                let step = Jet::linear((Complex64::new(i as f64, 0.0) - t.e) / (i + 1) as f64, Complex64::new(1.0 / (i + 1) as f64, 0.0), len);
                phi = phi.mul(&step);
            }
        }
        out
    }

    /// `Σ [ε^{-1}] K · f(e - ε)` for a per-term jet `f` that also reports the
    /// magnitude it was cancelled from; returns the sum and its total magnitude.
    fn combine(&self, mut f: impl FnMut(Complex64, usize) -> Option<(Jet, f64)>) -> Option<(Complex64, f64)> {
        let mut acc = ZERO;
        let mut mass = 0.0;
        for t in &self.terms {
            let (j, inner) = f(t.e, t.k.len())?;
            let v = t.k.residue_of_product(&j);
            if !v.is_finite() {
                return None;
            }
            acc += v;
            mass += abs_residue(&t.k, &j) + abs_residue(&t.k, &Jet::constant(Complex64::new(inner, 0.0), j.len()));
        }
        Some((acc, mass))
    }
}

/// `[ε^{-1}]` of the product with every coefficient replaced by its modulus.
fn abs_residue(x: &Jet, y: &Jet) -> f64 {
    let ax = Jet {
        val: x.val,
        c: x.c.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect(),
    };
    let ay = Jet {
        val: y.val,
        c: y.c.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect(),
    };
    ax.residue_of_product(&ay).re
}

/// Product that tolerates mismatched lengths by truncating to the shorter.
fn mul_jet(x: &Jet, y: &Jet) -> Jet {
    x.mul(y)
}

/// Re-express a jet with `val >= 0` as a Taylor jet of length `len`.
fn to_taylor(j: Jet, len: usize) -> Option<Jet> {
    if j.val < 0 {
        return None;
    }
    let mut c = vec![ZERO; len];
    for (i, slot) in c.iter_mut().enumerate() {
        *slot = j.coeff(i as i32);
    }
    Some(Jet { val: 0, c })
}

/// `g(n) = Γ(c + n)/Γ(d + n)`, summed from `n0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub c: Complex64,
    pub d: Complex64,
    pub n0: usize,
}

/// A computed value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub err: f64,
    /// number of terms or coefficients used
    pub terms: usize,
}

impl Kernel {
    pub fn new(c: Complex64, d: Complex64, n0: usize) -> Self {
        Self { c, d, n0 }
    }

    fn g(&self, n: usize) -> Result<Complex64> {
        Ok(gamma(self.c + n as f64)? * rgamma(self.d + n as f64))
    }

    /// `g(n0), g(n0+1), ..., g(end-1)`.
    fn values(&self, end: usize) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(end.saturating_sub(self.n0));
        if end <= self.n0 {
            return Ok(out);
        }
        let mut g = self.g(self.n0)?;
        for n in self.n0..end {
            out.push(g);
            let den = self.d + n as f64;
            g = if g == ZERO || den.norm() < 1e-8 {
                self.g(n + 1)?
            } else {
                g * (self.c + n as f64) / den
            };
        }
        Ok(out)
    }

    /// `Σ_{n>=n0} φ_{e-ε}(n) g(n)` as a Taylor jet in `ε`, with the size of
    /// the leading terms it was assembled from.
    fn full_jet(&self, e: Complex64, len: usize) -> Option<(Jet, f64)> {
        let phis = phi_jets(e, self.n0, len);
        match nearest_pole(self.c) {
            None => {
                let gc = gamma(self.c).ok()?;
                let mut full = to_taylor(gamma_jet(self.d - self.c + e, -1.0, len)?, len)?;
                full = full.mul(&to_taylor(rgamma_jet(self.d + e, -1.0, len)?, len)?);
                full = full.scale(gc * rgamma(self.d - self.c));
                let mut mass = full.c[0].norm();
                for (n, phi) in phis.iter().enumerate() {
                    let g = self.g(n).ok()?;
                    mass += (phi.c[0] * g).norm();
                    full = full.add(&phi.scale(-g));
                }
                Some((full, mass))
            }
            Some(c_int) => {
                let k0 = (-c_int) as usize;
                let dd = self.d - self.c;
                let big_d = dd.re.round();
                if self.n0 <= k0 || (dd - big_d).norm() > 1e-12 || big_d < 1.0 {
                    return None;
                }
                let big_d = big_d as usize;
                let mut total = Jet::constant(ZERO, len);
                let mut mass = 0.0;
                for i in 0..big_d {
                    let alpha = alt(i) / (factorial(i) * factorial(big_d - 1 - i));
                    let (t, m) = partial_fraction_jet(e, i as i64 - k0 as i64, &phis, len)?;
                    mass += alpha.abs() * m;
                    total = total.add(&t.scale(Complex64::new(alpha, 0.0)));
                }
                Some((total, mass))
            }
        }
    }
}

fn alt(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `φ_{e-ε}(n)` for `n < count`.
fn phi_jets(e: Complex64, count: usize, len: usize) -> Vec<Jet> {
    let mut out = Vec::with_capacity(count);
    let mut phi = Jet::constant(ONE, len);
    for i in 0..count {
        out.push(phi.clone());
        let step = Jet::linear((Complex64::new(i as f64, 0.0) - e) / (i + 1) as f64, Complex64::new(1.0 / (i + 1) as f64, 0.0), len);
        phi = phi.mul(&step);
    }
    out
}

/// `Σ_{n>=n0} φ_{e-ε}(n)/(n + β)` for integer `β`, with `φ` given for `n < n0`.
fn partial_fraction_jet(e: Complex64, beta: i64, phis: &[Jet], len: usize) -> Option<(Jet, f64)> {
    let ee = Complex64::new(1.0, 0.0) + e;
    let mut t = if beta > 0 {
        // Γ(β)Γ(1+e-ε)/Γ(1+β+e-ε)
        let g = to_taylor(gamma_jet(ee, -1.0, len)?, len)?;
        let r = to_taylor(rgamma_jet(ee + beta as f64, -1.0, len)?, len)?;
        g.mul(&r).scale(Complex64::new(factorial(beta as usize - 1), 0.0))
    } else {
        let k = (-beta) as usize;
        // φ(k)ψ(k+1) + (-1)^k Γ(1+e-ε)/k! · rΓ'(1+e-k-ε)
        let phik = phis.get(k)?.clone();
        let psi = digamma(Complex64::new(k as f64 + 1.0, 0.0)).ok()?;
        let g = to_taylor(gamma_jet(ee, -1.0, len)?, len)?;
        let rg = to_taylor(rgamma_jet(ee - k as f64, -1.0, len + 1)?, len + 1)?;
        let drg = Jet {
            val: 0,
            c: rg.derivative().c[..len].iter().map(|v| -v).collect(),
        };
        phik.scale(psi).add(&g.mul(&drg).scale(Complex64::new(alt(k) / factorial(k), 0.0)))
    };
    let mut mass = t.c[0].norm();
    for (n, phi) in phis.iter().enumerate() {
        let den = n as i64 + beta;
        if den == 0 {
            continue;
        }
        mass += phi.c[0].norm() / (den as f64).abs();
        t = t.add(&phi.scale(Complex64::new(-1.0 / den as f64, 0.0)));
    }
    Some((t, mass))
}

/// Power-law remainder estimate from points `(n, |x_n|)` of the last window.
fn power_tail(pts: &[(usize, f64)], n_end: usize) -> f64 {
    let pts: Vec<(f64, f64)> = pts
        .iter()
        .filter(|p| p.1 > 0.0)
        .map(|p| ((p.0 as f64).ln(), p.1.ln()))
        .collect();
    if pts.len() < 4 {
        return f64::INFINITY;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |acc, p| (acc.0 + (p.0 - mx) * (p.1 - my), acc.1 + (p.0 - mx) * (p.0 - mx)));
    let p = -num / den;
    if !(p > 1.05) {
        return f64::INFINITY;
    }
    // envelope constant C with x_n <= C n^{-p} on the window
    let c = pts.iter().map(|q| (q.1 + p * q.0).exp()).fold(0.0, f64::max);
    2.0 * c * (n_end as f64).powf(1.0 - p) / (p - 1.0)
}

/// Outcome of inspecting the last window of a partial sum.
enum Window {
    /// remainder estimate from terms that rise above rounding noise
    Signal(f64),
    /// residual terms are indistinguishable from rounding noise
    Noise(f64),
}

/// Classifies the window `(n, |x_n|, noise_n)`; `decay` turns the last noisy
/// term into a remainder bound.
fn inspect(window: &[(usize, f64, f64)], n_end: usize, geometric: Option<f64>) -> Window {
    let signal: Vec<(usize, f64)> = window
        .iter()
        .filter(|w| w.1 > 4.0 * w.2)
        .map(|w| (w.0, w.1))
        .collect();
    if signal.len() * 2 < window.len() {
        let level = window.iter().map(|w| w.1.max(w.2)).fold(0.0, f64::max);
        let factor = match geometric {
            Some(r) => r / (1.0 - r),
            None => n_end as f64 / MODEL_ORDERS[1],
        };
        return Window::Noise(level * factor);
    }
    match geometric {
        Some(r) => {
            let level = signal.iter().map(|w| w.1).fold(0.0, f64::max);
            Window::Signal(2.0 * level * r / (1.0 - r))
        }
        None => Window::Signal(power_tail(&signal, n_end)),
    }
}

/// Shared doubling loop: `terms(n)` returns `(value, round, window)` for a
/// partial sum over `n` coefficients.
fn converge(
    tol: f64,
    start: usize,
    max_n: usize,
    geometric: Option<f64>,
    mut terms: impl FnMut(usize) -> Result<(Complex64, f64, Vec<(usize, f64, f64)>)>,
) -> Result<Estimate> {
    let mut n = start.min(max_n);
    loop {
        let (value, round, window) = terms(n)?;
        if !value.is_finite() {
            return Err(FwxError::Domain(format!("series overflowed at {n} terms")));
        }
        let (trunc, noisy) = match inspect(&window, n, geometric) {
            Window::Signal(t) => (t, false),
            Window::Noise(t) => (t, true),
        };
        let err = trunc + round;
        if trunc <= tol * value.norm() || noisy {
            return Ok(Estimate { value, err, terms: n });
        }
        if n >= max_n {
            return Err(FwxError::Tolerance {
                requested: tol,
                achieved: err / value.norm().max(f64::MIN_POSITIVE),
                terms: n,
            });
        }
        n = (2 * n).min(max_n);
    }
}

/// `Σ_{n>=n0} V_n(θ) g(n)` for the table's `(σ, θ)`.
///
/// Returns the best value the coefficients support; `err` may exceed `tol` when
/// rounding in `V_n` dominates, and callers decide whether that is acceptable.
pub fn kernel_sum(table: &CoefficientTable, kernel: &Kernel, tol: f64, max_n: usize) -> Result<Estimate> {
    let mut best: Option<Result<Estimate>> = None;
    for slot in 0..MODEL_ORDERS.len() {
        let r = kernel_sum_with(table, kernel, tol, max_n, slot);
        let done = matches!(&r, Ok(e) if e.err <= 0.1 * tol * e.value.norm());
        best = match (best, r) {
            (Some(Ok(b)), Ok(e)) => Some(Ok(if e.err < b.err { e } else { b })),
            (Some(Ok(b)), Err(_)) => Some(Ok(b)),
            (_, r) => Some(r),
        };
        if done {
            break;
        }
    }
    best.expect("at least one model order")
}

fn kernel_sum_with(table: &CoefficientTable, kernel: &Kernel, tol: f64, max_n: usize, slot: usize) -> Result<Estimate> {
    let cache = table.tail(slot);
    let model = cache.model.as_ref().and_then(|m| m.combine(|e, len| kernel.full_jet(e, len)));
    let use_model = model.is_some();
    let (model_part, model_mass) = model.unwrap_or((ZERO, 0.0));
    let max_n = max_n.max(kernel.n0 + 64);
    let start = (kernel.n0 + 32).next_power_of_two().max(64);
    converge(tol, start, max_n, None, |n| {
        let v = table.v_prefix(n);
        let nz = table.v_noise_prefix(n);
        let m = if use_model { cache.prefix(n) } else { vec![ZERO; n] };
        let g = kernel.values(n)?;
        let mut head = ZERO;
        let mut round = 8.0 * f64::EPSILON * model_mass;
        let mut window = Vec::with_capacity(FIT_WINDOW);
        for (i, gi) in g.iter().enumerate() {
            let idx = kernel.n0 + i;
            let x = (v[idx] - m[idx]) * gi;
            head += x;
            let noise = nz[idx] * gi.norm();
            round += noise + 4.0 * f64::EPSILON * ((m[idx] * gi).norm() + x.norm());
            if idx + FIT_WINDOW >= n {
                window.push((idx, x.norm(), noise));
            }
        }
        Ok((head + model_part, round, window))
    })
}

/// `Σ_n V_n(θ) w^n` with `w = 1 - t`, `|w| < 1`.
pub fn power_sum(table: &CoefficientTable, t: Complex64, tol: f64, max_n: usize) -> Result<Estimate> {
    let w = ONE - t;
    let lt = t.ln();
    let cache = table.tail(0);
    let model = cache
        .model
        .as_ref()
        .and_then(|m| m.combine(|e, len| Some((exp_jet(e * lt, -lt, len), 0.0))));
    let use_model = model.is_some();
    let (model_part, model_mass) = model.unwrap_or((ZERO, 0.0));
    converge(tol, 64, max_n.max(64), Some(w.norm()), |n| {
        let v = table.v_prefix(n);
        let nz = table.v_noise_prefix(n);
        let m = if use_model { cache.prefix(n) } else { vec![ZERO; n] };
        let mut head = ZERO;
        let mut round = 8.0 * f64::EPSILON * model_mass;
        let mut wp = ONE;
        let mut window = Vec::with_capacity(FIT_WINDOW);
        for i in 0..n {
            let x = (v[i] - m[i]) * wp;
            head += x;
            let noise = nz[i] * wp.norm();
            round += noise + 4.0 * f64::EPSILON * (m[i] * wp).norm();
            if i + FIT_WINDOW >= n {
                window.push((i, x.norm(), noise));
            }
            wp *= w;
        }
        Ok((head + model_part, round, window))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParameterSet;

    #[test]
    fn clusters_merge_coincident_poles() {
        let a = [Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)];
        let cl = pole_clusters(&a, &[1.0, 1.0], 3.0);
        assert_eq!(cl.len(), 3);
        assert!(cl.iter().all(|c| c.multiplicity() == 2));
        let a = [Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)];
        let cl = pole_clusters(&a, &[0.5, 1.0], 3.0);
        // u = 1, 3, 5, ... and u = 1, 2, 3: coincide at 1 and 3... only below 3
        assert_eq!(cl[0].multiplicity(), 2);
        assert_eq!(cl.len(), 2);
    }

    #[test]
    fn model_tracks_v_n() {
        let ps = ParameterSet::real(&[0.35, 0.6], &[0.5, 1.0], &[0.9], &[0.5]).unwrap();
        let t = ps.table(1.0, 0.0).unwrap();
        let m = t.tail(0).prefix(256);
        let v = t.v_prefix(256);
        for n in [100, 200] {
            let rel = (v[n] - m[n]).norm() / v[n].norm();
            assert!(rel < 1e-12, "n={n} rel={rel:e}");
        }
    }

    #[test]
    fn model_with_double_poles() {
        let ps = ParameterSet::real(&[0.5, 0.5], &[1.0, 1.0], &[1.0], &[1.0]).unwrap();
        let t = ps.table(1.0, 0.0).unwrap();
        let m = t.tail(0).prefix(300);
        let v = t.v_prefix(300);
        for n in [100, 299] {
            let rel = (v[n] - m[n]).norm() / v[n].norm();
            assert!(rel < 1e-12, "n={n} rel={rel:e}");
        }
    }

    #[test]
    fn partial_fraction_matches_direct_sum() {
        // Σ_{n>=3} φ_e(n) /(n - 1) with e large enough for fast convergence
        let e = Complex64::new(6.3, 0.0);
        let phis = phi_jets(e, 3, 2);
        let jet = partial_fraction_jet(e, -1, &phis, 2).unwrap().0;
        let mut direct = ZERO;
        let mut phi = ONE;
        for n in 0..200_000usize {
            if n >= 3 {
                direct += phi / (n as f64 - 1.0);
            }
            phi = phi * (n as f64 - e) / (n as f64 + 1.0);
        }
        assert!((jet.c[0] - direct).norm() < 1e-12 * direct.norm(), "{} {}", jet.c[0], direct);
    }

    #[test]
    fn full_jet_matches_direct_sum() {
        let e = Complex64::new(5.2, 0.0);
        let k = Kernel::new(Complex64::new(0.3, 0.0), Complex64::new(1.3, 0.0), 2);
        let jet = k.full_jet(e, 2).unwrap().0;
        let g = k.values(200_000).unwrap();
        let mut direct = ZERO;
        let mut phi = ONE;
        for n in 0..200_000usize {
            if n >= 2 {
                direct += phi * g[n - 2];
            }
            phi = phi * (n as f64 - e) / (n as f64 + 1.0);
        }
        assert!((jet.c[0] - direct).norm() < 1e-12 * direct.norm(), "{} {}", jet.c[0], direct);
    }

    #[test]
    fn gauss_summation_via_kernel() {
        let (a, b, c) = (0.2, 1.0, 1.3);
        let ps = ParameterSet::gauss(a, b, c).unwrap();
        let t = ps.table(1.0, 0.0).unwrap();
        let mu = ps.mu();
        let s = kernel_sum(&t, &Kernel::new(mu, mu + 1.0, 0), 1e-13, DEFAULT_MAX_N).unwrap();
        let g = |x: f64| gamma(Complex64::new(x, 0.0)).unwrap();
        let exact = g(a) * g(b) * g(c - a - b) / (g(c - a) * g(c - b));
        assert!((s.value - exact).norm() < 1e-11 * exact.norm(), "{} {}", s.value, exact);
    }
}
