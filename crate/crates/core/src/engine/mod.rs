//! Expansion coefficients of the near-singularity machinery, cached per
//! `(σ, θ)`.
//!
//! Raw `q_m` and `l_r` grow factorially, so the table stores the scaled
//! sequences `q_m/m!` and `l_r/r!` and a scaled Stirling row
//! `s(n, r) r! / Γ(n + μ_σ)`. With these, `V_n` is an inner product of bounded
//! quantities. Cancellation still grows with `n` when scales are small, so each
//! `V_n` carries a rounding estimate alongside its value.

mod coeffs;
pub mod jet;
pub mod tail;

use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::Result;
use crate::params::ParameterSet;
use crate::poly::{bernoulli_scaled_polynomial, norlund_series};
use crate::special::{ln_gamma_real, rgamma};

pub use coeffs::*;
pub use tail::{Kernel, Estimate, PoleCluster, TailModel};

/// Rounding multiplier applied to the cancellation mass of `V_n`.
const NOISE_ULPS: f64 = 8.0;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Default)]
struct State {
    /// `q_m / m!`, index 0 unused.
    q: Vec<Complex64>,
    l: Vec<Complex64>,
    q_theta: Vec<Complex64>,
    l_theta: Vec<Complex64>,
    v: Vec<Complex64>,
    /// `|ν| Σ_r |l̃_r σ̃(n, r)|`, the scale of the cancellation in `V_n`
    v_mass: Vec<f64>,
    /// scaled Stirling row for `n = v.len() - 1`
    row: Vec<Complex64>,
}

/// Lazily extended coefficient sequences for one parameter set and `(σ, θ)`.
///
/// Readers always see a prefix of the final sequences; extension happens under
/// a write lock and never rewrites existing entries.
#[derive(Debug)]
pub struct CoefficientTable {
    a: Vec<Complex64>,
    big_a: Vec<f64>,
    b: Vec<Complex64>,
    big_b: Vec<f64>,
    rho: f64,
    sigma: f64,
    theta: f64,
    mu: Complex64,
    nu: Complex64,
    state: RwLock<State>,
    /// tail models keyed by their order `emax`
    tails: [OnceLock<TailCache>; tail::MODEL_ORDERS.len()],
}

impl CoefficientTable {
    pub(crate) fn new(ps: &ParameterSet, sigma: f64, theta: f64) -> Self {
        Self {
            a: ps.a().to_vec(),
            big_a: ps.big_a().to_vec(),
            b: ps.b().to_vec(),
            big_b: ps.big_b().to_vec(),
            rho: ps.rho(),
            sigma,
            theta,
            mu: ps.mu(),
            nu: ps.nu(),
            state: RwLock::new(State {
                q: vec![ZERO],
                l: vec![Complex64::new(1.0, 0.0)],
                q_theta: vec![ZERO],
                l_theta: vec![Complex64::new(1.0, 0.0)],
                ..State::default()
            }),
            tails: Default::default(),
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn mu(&self) -> Complex64 {
        self.mu
    }
    pub fn mu_sigma(&self) -> Complex64 {
        self.mu + self.sigma
    }
    pub fn nu(&self) -> Complex64 {
        self.nu
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub(crate) fn upper(&self) -> (&[Complex64], &[f64]) {
        (&self.a, &self.big_a)
    }
    pub(crate) fn lower(&self) -> (&[Complex64], &[f64]) {
        (&self.b, &self.big_b)
    }

    /// Bracket of the `q_m` formula divided by `(m+1)!`, without the θ terms.
    fn q_bracket(&self, m: usize) -> Complex64 {
        let mut s = ZERO;
        for (ak, sk) in self.a.iter().zip(&self.big_a) {
            s += bernoulli_scaled_polynomial(m + 1, *ak) * sk.powi(-(m as i32));
        }
        for (bj, sj) in self.b.iter().zip(&self.big_b) {
            s -= bernoulli_scaled_polynomial(m + 1, *bj) * sj.powi(-(m as i32));
        }
        s -= bernoulli_scaled_polynomial(m + 1, Complex64::new(self.sigma, 0.0));
        s
    }

    fn extend(&self, n: usize) {
        if self.state.read().expect("table poisoned").v.len() > n {
            return;
        }
        let mut st = self.state.write().expect("table poisoned");
        let mu_s = self.mu_sigma();
        let shift_hi = self.theta + mu_s;
        let shift_lo = Complex64::new(self.theta + 1.0, 0.0);
        while st.q.len() <= n {
            let m = st.q.len();
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            let base = self.q_bracket(m);
            let extra = bernoulli_scaled_polynomial(m + 1, shift_hi) - bernoulli_scaled_polynomial(m + 1, shift_lo);
            st.q.push(base * sign);
            st.q_theta.push((base + extra) * sign);
        }
        while st.l.len() <= n {
            let r = st.l.len();
            let inv = inverse_binomials(r);
            let (mut acc, mut acc_t) = (ZERO, ZERO);
            for m in 1..=r {
                acc += st.q[m] * st.l[r - m] * inv[m];
                acc_t += st.q_theta[m] * st.l_theta[r - m] * inv[m];
            }
            st.l.push(acc / r as f64);
            st.l_theta.push(acc_t / r as f64);
        }
        let c = shift_hi;
        while st.v.len() <= n {
            let k = st.v.len();
            if k == 0 {
                st.row = vec![rgamma(mu_s)];
            } else {
                // σ̃(k, r) = [r σ̃(k-1, r-1) + (c + k - 1) σ̃(k-1, r)] / (k - 1 + μ_σ)
                let prev = std::mem::take(&mut st.row);
                let den = mu_s + (k - 1) as f64;
                let f = c + (k - 1) as f64;
                let mut row = vec![ZERO; k + 1];
                for (r, slot) in row.iter_mut().enumerate() {
                    let mut v = ZERO;
                    if r >= 1 {
                        v += prev[r - 1] * r as f64;
                    }
                    if r < k {
                        v += prev[r] * f;
                    }
                    *slot = v / den;
                }
                st.row = row;
            }
            let (mut vk, mut mass) = (ZERO, 0.0);
            for (s, l) in st.row.iter().zip(&st.l_theta) {
                let t = s * l;
                vk += t;
                mass += t.norm();
            }
            st.v.push(vk * self.nu);
            st.v_mass.push(mass * self.nu.norm());
        }
    }

    /// `q_m / m!` for `m >= 1`.
    pub fn q_scaled(&self, m: usize) -> Complex64 {
        self.extend(m);
        self.state.read().expect("table poisoned").q[m]
    }

    /// `q_m^θ / m!` for `m >= 1`.
    pub fn q_theta_scaled(&self, m: usize) -> Complex64 {
        self.extend(m);
        self.state.read().expect("table poisoned").q_theta[m]
    }

    /// `l_r / r!`.
    pub fn l_scaled(&self, r: usize) -> Complex64 {
        self.extend(r);
        self.state.read().expect("table poisoned").l[r]
    }

    /// `l_r^θ / r!`.
    pub fn l_theta_scaled(&self, r: usize) -> Complex64 {
        self.extend(r);
        self.state.read().expect("table poisoned").l_theta[r]
    }

    pub fn q(&self, m: usize) -> Complex64 {
        self.q_scaled(m) * factorial(m)
    }
    pub fn q_theta(&self, m: usize) -> Complex64 {
        self.q_theta_scaled(m) * factorial(m)
    }
    pub fn l(&self, r: usize) -> Complex64 {
        self.l_scaled(r) * factorial(r)
    }
    pub fn l_theta(&self, r: usize) -> Complex64 {
        self.l_theta_scaled(r) * factorial(r)
    }

    /// `V_n(θ)` by the Stirling-number form.
    pub fn v(&self, n: usize) -> Complex64 {
        self.extend(n);
        self.state.read().expect("table poisoned").v[n]
    }

    /// `V_0(θ) .. V_{n-1}(θ)`.
    pub fn v_prefix(&self, n: usize) -> Vec<Complex64> {
        if n == 0 {
            return Vec::new();
        }
        self.extend(n - 1);
        self.state.read().expect("table poisoned").v[..n].to_vec()
    }

    /// Rounding-error scale of `V_0 .. V_{n-1}`.
    pub fn v_noise_prefix(&self, n: usize) -> Vec<f64> {
        if n == 0 {
            return Vec::new();
        }
        self.extend(n - 1);
        let st = self.state.read().expect("table poisoned");
        st.v_mass[..n].iter().map(|m| m * NOISE_ULPS * f64::EPSILON).collect()
    }

    /// `V_n(θ)` by the Bernoulli-Nørlund form, independent of the Stirling route.
    pub fn v_norlund(&self, n: usize) -> Complex64 {
        self.extend(n);
        let l: Vec<Complex64> = self.state.read().expect("table poisoned").l[..=n].to_vec();
        let mu_s = self.mu_sigma();
        let ser = norlund_series(&(mu_s + n as f64), &Complex64::new(-self.theta, 0.0), n + 1);
        let mut acc = ZERO;
        for (r, lr) in l.iter().enumerate() {
            let k = n - r;
            // (-1)^k l_r/(k! Γ(r+μσ)) B_k = (-1)^k (l_r/r!) r! [t^k] / Γ(r+μσ)
            let lnr = ln_gamma_real(r as f64 + 1.0).map(|x| x.0).unwrap_or(0.0);
            let term = lr * ser.coeff(k) * rgamma(mu_s + r as f64) * lnr.exp();
            acc += if k % 2 == 1 { -term } else { term };
        }
        acc * self.nu
    }

    /// Tail model of order `tail::MODEL_ORDERS[slot]`, built on first use.
    pub(crate) fn tail(&self, slot: usize) -> &TailCache {
        self.tails[slot].get_or_init(|| TailCache {
            model: TailModel::build(self, tail::MODEL_ORDERS[slot]),
            values: RwLock::new(Vec::new()),
        })
    }

    /// The highest-order tail model, if the parameters admit one.
    pub fn tail_model(&self) -> Option<&TailModel> {
        self.tail(tail::MODEL_ORDERS.len() - 1).model.as_ref()
    }
}

/// A tail model with its cached values `M_n`.
#[derive(Debug)]
pub(crate) struct TailCache {
    pub(crate) model: Option<TailModel>,
    values: RwLock<Vec<Complex64>>,
}

impl TailCache {
    /// `M_0 .. M_{n-1}`; zeros when no model is available.
    pub(crate) fn prefix(&self, n: usize) -> Vec<Complex64> {
        {
            let vals = self.values.read().expect("tail cache poisoned");
            if vals.len() >= n {
                return vals[..n].to_vec();
            }
        }
        let len = n.next_power_of_two();
        let fresh = match &self.model {
            Some(m) => m.values(len),
            None => vec![ZERO; len],
        };
        let mut vals = self.values.write().expect("tail cache poisoned");
        if vals.len() < fresh.len() {
            *vals = fresh;
        }
        vals[..n].to_vec()
    }
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// `1/binom(r, m)` for `m = 0..=r`, built symmetrically to avoid premature underflow.
fn inverse_binomials(r: usize) -> Vec<f64> {
    let mut out = vec![0.0; r + 1];
    let mut x = 1.0;
    out[0] = 1.0;
    for m in 1..=r / 2 {
        x *= m as f64 / (r - m + 1) as f64;
        out[m] = x;
    }
    for m in 0..=r / 2 {
        out[r - m] = out[m];
    }
    out
}

/// Scaled `q_m/m!` read through the shared cache.
pub fn q_scaled(ps: &ParameterSet, sigma: f64, m: usize) -> Result<Complex64> {
    Ok(ps.table(sigma, 0.0)?.q_scaled(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{bell_complete, bell_complete_partition, bernoulli_polynomial, l_from_q, nair_determinant};

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn q1_direct_substitution() {
        let ps = ParameterSet::gauss(0.5, 0.7, 1.3).unwrap();
        let t = ps.table(1.0, 0.0).unwrap();
        let b2 = |x: f64| bernoulli_polynomial(2, Complex64::new(x, 0.0));
        let want = (b2(0.5) + b2(0.7) - b2(1.3) - b2(1.0)) * 0.5;
        assert!(close(t.q(1), want, 1e-14));
        let b3 = |x: f64| bernoulli_polynomial(3, Complex64::new(x, 0.0));
        let want = -(b3(0.5) + b3(0.7) - b3(1.3) - b3(1.0)) / 3.0;
        assert!(close(t.q(2), want, 1e-13));
    }

    #[test]
    fn q_vanishes_when_bracket_telescopes() {
        let ps = ParameterSet::real(&[0.8, 1.0], &[1.0, 1.0], &[0.8], &[1.0]).unwrap();
        let t = ps.table(1.0, 0.0).unwrap();
        for m in 1..8 {
            assert!(t.q(m).norm() < 1e-15);
        }
    }

    #[test]
    fn l_triple_agreement() {
        let ps = ParameterSet::real(&[0.35, 0.6], &[0.5, 1.0], &[0.9], &[0.5]).unwrap();
        let t = ps.table(1.0, 0.0).unwrap();
        let q: Vec<Complex64> = (1..=12).map(|m| t.q(m)).collect();
        let rec = l_from_q(&q, 12);
        for r in 1..=12 {
            let x: Vec<Complex64> = (1..=r).map(|m| q[m - 1] * factorial(m - 1)).collect();
            let bell = bell_complete(&x) / factorial(r);
            let part = bell_complete_partition(&x) / factorial(r);
            let nair = nair_determinant(&q, r).unwrap();
            for other in [bell, part, nair, t.l(r)] {
                assert!(close(other, rec[r], 1e-12), "r={r}");
            }
        }
    }

    #[test]
    fn l_theta_reduces_when_mu_sigma_is_one() {
        let ps = ParameterSet::gauss(0.5, 0.7, 1.3).unwrap(); // mu = 0.1
        let sigma = 0.9;
        let t0 = ps.table(sigma, 0.0).unwrap();
        for theta in [0.3, 1.7] {
            let t = ps.table(sigma, theta).unwrap();
            for r in 0..=10 {
                assert!(close(t.l_theta(r), t0.l(r), 1e-12));
            }
        }
    }

    #[test]
    fn v0_is_nu_over_gamma() {
        let ps = ParameterSet::real(&[0.35, 0.6], &[0.5, 1.0], &[0.9], &[0.5]).unwrap();
        for theta in [0.0, 0.4] {
            let t = ps.table(1.0, theta).unwrap();
            assert!(close(t.v(0), ps.nu() * rgamma(ps.mu_sigma(1.0)), 1e-15));
        }
    }

    #[test]
    fn v_dual_forms_agree() {
        let ps = ParameterSet::gauss(0.5, 0.7, 1.3).unwrap();
        for theta in [0.0, 0.6] {
            let t = ps.table(1.0, theta).unwrap();
            for n in 0..=30 {
                assert!(close(t.v_norlund(n), t.v(n), 1e-10), "n={n} theta={theta}");
            }
        }
    }

    #[test]
    fn gauss_v_reference_values() {
        // Taylor coefficients of (1-w)^{b-1} 2F1(c-a, σ-a; μσ; w)/Γ(μσ), high-precision reference
        let ps = ParameterSet::gauss(0.5, 0.7, 1.3).unwrap();
        let t = ps.table(1.0, 0.0).unwrap();
        let refs = [
            (0, 1.051_137_006_111_777_8),
            (1, 0.697_572_740_419_634_36),
            (2, 0.565_361_546_858_691_92),
            (5, 0.403_486_475_599_287_09),
            (30, 0.187_424_984_681_065_4),
        ];
        for (n, want) in refs {
            assert!(close(t.v(n), Complex64::new(want, 0.0), 1e-13), "n={n} {}", t.v(n));
        }
    }

    #[test]
    fn table_prefix_is_stable_under_extension() {
        let ps = ParameterSet::gauss(0.3, 0.4, 1.5).unwrap();
        let t = ps.table(1.0, 0.0).unwrap();
        let short = t.v_prefix(20);
        let _ = t.v(300);
        assert_eq!(&t.v_prefix(300)[..20], &short[..]);
    }
}
