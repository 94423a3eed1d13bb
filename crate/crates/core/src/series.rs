//! Truncated formal power series over an exact or floating scalar field.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Field operations shared by exact rationals and complex floats.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    /// Size proxy used only for pivot selection.
    fn magnitude(&self) -> f64;
}

impl Scalar for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

/// Dense coefficients `c_0 + c_1 t + ... + c_{n-1} t^{n-1}` modulo `t^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> FormalSeries<T> {
    /// Panics on an empty coefficient vector.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "formal series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn zero(len: usize) -> Self {
        Self::new(vec![T::zero(); len.max(1)])
    }

    pub fn one(len: usize) -> Self {
        let mut s = Self::zero(len);
        s.coeffs[0] = T::one();
        s
    }

    /// `c0 + c1 t` truncated to `len`.
    pub fn linear(c0: T, c1: T, len: usize) -> Self {
        let mut s = Self::zero(len);
        s.coeffs[0] = c0;
        if len > 1 {
            s.coeffs[1] = c1;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// Re-truncate (or zero-pad) to `len`.
    pub fn truncate(&self, len: usize) -> Self {
        Self::new((0..len.max(1)).map(|k| self.coeff(k)).collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self::new((0..n).map(|k| self.coeffs[k].clone() + other.coeffs[k].clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self::new((0..n).map(|k| self.coeffs[k].clone() - other.coeffs[k].clone()).collect())
    }

    /// Cauchy product truncated to the shorter length.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut out = vec![T::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        let n = self.len();
        let mut out = vec![T::zero(); n];
        for k in 1..n {
            out[k - 1] = self.coeffs[k].clone() * T::from_i64(k as i64);
        }
        Self::new(out)
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let n = self.len();
        let mut out = vec![T::zero(); n];
        for k in 1..n {
            out[k] = self.coeffs[k - 1].clone() / T::from_i64(k as i64);
        }
        Self::new(out)
    }

    /// Multiplicative inverse; `None` when the constant term vanishes.
    pub fn inv(&self) -> Option<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return None;
        }
        let n = self.len();
        let mut out = vec![T::zero(); n];
        out[0] = T::one() / c0.clone();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out[k] = -(acc / c0.clone());
        }
        Some(Self::new(out))
    }

    /// `log f` for `f(0) = 1`, via `(log f)' = f'/f`.
    pub fn log(&self) -> Option<Self> {
        if !(self.coeffs[0].clone() - T::one()).is_zero() {
            return None;
        }
        let q = self.derivative().mul(&self.inv()?);
        Some(q.integral())
    }

    /// `exp f` for `f(0) = 0`, via the recurrence `k e_k = sum_j j f_j e_{k-j}`.
    pub fn exp(&self) -> Option<Self> {
        if !self.coeffs[0].is_zero() {
            return None;
        }
        let n = self.len();
        let mut out = vec![T::zero(); n];
        out[0] = T::one();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc = acc + self.coeffs[j].clone() * T::from_i64(j as i64) * out[k - j].clone();
            }
            out[k] = acc / T::from_i64(k as i64);
        }
        Some(Self::new(out))
    }

    /// `f^s = exp(s log f)` for `f(0) = 1`.
    pub fn pow(&self, s: &T) -> Option<Self> {
        self.log()?.scale(s).exp()
    }
}
