//! Truncated Laurent series in a small parameter `ε`, used to take residues at
//! coincident poles and to expand gamma ratios around their arguments.

use num_complex::Complex64;

use crate::series::FormalSeries;
use crate::special::{gamma, nearest_pole, polygamma, rgamma};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `ε^val · (c_0 + c_1 ε + ... + c_{len-1} ε^{len-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub val: i32,
    pub c: Vec<Complex64>,
}

impl Jet {
    pub fn constant(v: Complex64, len: usize) -> Self {
        let mut c = vec![ZERO; len];
        c[0] = v;
        Self { val: 0, c }
    }

    /// `a + b ε`.
    pub fn linear(a: Complex64, b: Complex64, len: usize) -> Self {
        let mut j = Self::constant(a, len);
        if len > 1 {
            j.c[1] = b;
        }
        j
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Coefficient of `ε^p`; zero outside the stored window.
    pub fn coeff(&self, p: i32) -> Complex64 {
        let i = p - self.val;
        if i < 0 {
            return ZERO;
        }
        self.c.get(i as usize).copied().unwrap_or(ZERO)
    }

    pub fn residue(&self) -> Complex64 {
        self.coeff(-1)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            val: self.val,
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut c = vec![ZERO; n];
        for i in 0..n {
            if self.c[i] == ZERO {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += self.c[i] * other.c[j];
            }
        }
        Self {
            val: self.val + other.val,
            c,
        }
    }

    /// Sum of two jets; both must share the same valuation.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.val, other.val);
        let n = self.len().min(other.len());
        Self {
            val: self.val,
            c: (0..n).map(|i| self.c[i] + other.c[i]).collect(),
        }
    }

    /// `d/dε` for a Taylor jet (`val = 0`).
    pub fn derivative(&self) -> Self {
        debug_assert_eq!(self.val, 0);
        let n = self.len();
        let mut c = vec![ZERO; n];
        for k in 1..n {
            c[k - 1] = self.c[k] * k as f64;
        }
        Self { val: 0, c }
    }

    /// `[ε^{-1}] (self · other)` without forming the product.
    pub fn residue_of_product(&self, other: &Self) -> Complex64 {
        let target = -1 - self.val - other.val;
        if target < 0 {
            return ZERO;
        }
        let mut acc = ZERO;
        for i in 0..=target as usize {
            let j = target as usize - i;
            if i < self.len() && j < other.len() {
                acc += self.c[i] * other.c[j];
            }
        }
        acc
    }
}

/// `exp(a + b ε)`.
pub fn exp_jet(a: Complex64, b: Complex64, len: usize) -> Jet {
    let mut c = vec![ZERO; len];
    let mut t = a.exp();
    for (k, slot) in c.iter_mut().enumerate() {
        *slot = t;
        t = t * b / (k as f64 + 1.0);
    }
    Jet { val: 0, c }
}

fn log_gamma_taylor(x: Complex64, k: f64, len: usize, sign: f64) -> Option<FormalSeries<Complex64>> {
    // sum_{m>=1} ψ^{(m-1)}(x) (kε)^m / m!
    let mut c = vec![ZERO; len];
    let mut fact = 1.0;
    let mut kp = 1.0;
    for m in 1..len {
        fact *= m as f64;
        kp *= k;
        c[m] = polygamma((m - 1) as u32, x).ok()? * (sign * kp / fact);
    }
    Some(FormalSeries::new(c))
}

/// `1/(kε - i)` for `i != 0`.
fn inv_shift(k: f64, i: f64, len: usize) -> Jet {
    // -(1/i) sum (kε/i)^n
    let mut c = vec![ZERO; len];
    let r = k / i;
    let mut t = -1.0 / i;
    for slot in c.iter_mut() {
        *slot = Complex64::new(t, 0.0);
        t *= r;
    }
    Jet { val: 0, c }
}

/// `Γ(x + kε)`; Laurent with a simple pole when `x` is a non-positive integer.
pub fn gamma_jet(x: Complex64, k: f64, len: usize) -> Option<Jet> {
    if let Some(j) = nearest_pole(x) {
        let j = -j;
        // Γ(-j + kε) = Γ(1 + kε) / (kε · prod_{i=1}^{j} (kε - i))
        let mut out = gamma_jet(ONE, k, len)?;
        for i in 1..=j {
            out = out.mul(&inv_shift(k, i as f64, len));
        }
        out = out.scale(Complex64::new(1.0 / k, 0.0));
        out.val -= 1;
        return Some(out);
    }
    let g = gamma(x).ok()?;
    let e = log_gamma_taylor(x, k, len, 1.0)?.exp()?;
    Some(Jet {
        val: 0,
        c: e.coeffs().iter().map(|v| v * g).collect(),
    })
}

/// `1/Γ(x + kε)`; vanishes to first order when `x` is a non-positive integer.
pub fn rgamma_jet(x: Complex64, k: f64, len: usize) -> Option<Jet> {
    if let Some(j) = nearest_pole(x) {
        let j = -j;
        // kε · prod_{i=1}^{j} (kε - i) / Γ(1 + kε)
        let mut out = rgamma_jet(ONE, k, len)?;
        for i in 1..=j {
            out = out.mul(&Jet::linear(Complex64::new(-(i as f64), 0.0), Complex64::new(k, 0.0), len));
        }
        out = out.scale(Complex64::new(k, 0.0));
        out.val += 1;
        return Some(out);
    }
    let g = rgamma(x);
    let e = log_gamma_taylor(x, k, len, -1.0)?.exp()?;
    Some(Jet {
        val: 0,
        c: e.coeffs().iter().map(|v| v * g).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::digamma;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn gamma_jet_regular_matches_derivatives() {
        let x = Complex64::new(0.7, 0.3);
        let j = gamma_jet(x, 2.0, 3).unwrap();
        let g = gamma(x).unwrap();
        let psi = digamma(x).unwrap();
        assert!((j.c[0] - g).norm() < 1e-14);
        assert!((j.c[1] - g * psi * 2.0).norm() < 1e-13);
        // second coefficient: Γ (ψ² + ψ') k² / 2
        let want = g * (psi * psi + polygamma(1, x).unwrap()) * 2.0;
        assert!((j.c[2] - want).norm() < 1e-12);
    }

    #[test]
    fn gamma_jet_at_pole() {
        // Γ(-2 + ε) = 1/(2ε) + (ψ(3))/2 + O(ε)
        let j = gamma_jet(c(-2.0), 1.0, 3).unwrap();
        assert_eq!(j.val, -1);
        assert!((j.c[0] - c(0.5)).norm() < 1e-15);
        let psi3 = digamma(c(3.0)).unwrap();
        assert!((j.c[1] - psi3 * 0.5).norm() < 1e-14);
        // Γ·(1/Γ) = 1
        let r = rgamma_jet(c(-2.0), 1.0, 3).unwrap();
        let one = j.mul(&r);
        assert_eq!(one.val, 0);
        assert!((one.c[0] - c(1.0)).norm() < 1e-14 && one.c[1].norm() < 1e-13);
    }

    #[test]
    fn rgamma_regular_inverse() {
        let x = Complex64::new(-1.3, 0.4);
        let p = gamma_jet(x, -0.5, 4).unwrap().mul(&rgamma_jet(x, -0.5, 4).unwrap());
        assert!((p.c[0] - c(1.0)).norm() < 1e-13);
        for k in 1..4 {
            assert!(p.c[k].norm() < 1e-12);
        }
    }

    #[test]
    fn residue_of_product_matches_product() {
        let a = Jet { val: -2, c: vec![c(1.0), c(2.0), c(3.0)] };
        let b = exp_jet(c(0.3), c(-1.2), 3);
        assert!((a.residue_of_product(&b) - a.mul(&b).residue()).norm() < 1e-15);
    }
}
