//! Exact combinatorial kernels: Bernoulli and Bernoulli-Nørlund polynomials,
//! non-central Stirling numbers, complete Bell polynomials and the Nair
//! determinant.
//!
//! Everything integer-indexed is generic over [`Scalar`], so the same code runs
//! in exact rational arithmetic for cross-checks and in `Complex64` for the
//! numerical engine.

use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{FwxError, Result};
use crate::series::{FormalSeries, Scalar};

fn bernoulli_memo() -> &'static RwLock<Vec<BigRational>> {
    static MEMO: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(vec![BigRational::one()]))
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli number `B_k` with `B_1 = -1/2`.
pub fn bernoulli_number(k: usize) -> BigRational {
    if let Some(b) = bernoulli_memo().read().expect("memo poisoned").get(k) {
        return b.clone();
    }
    let mut memo = bernoulli_memo().write().expect("memo poisoned");
    while memo.len() <= k {
        let m = memo.len();
        if m > 1 && m % 2 == 1 {
            memo.push(BigRational::zero());
            continue;
        }
        // sum_{j=0}^{m} binom(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        for (j, b) in memo.iter().enumerate() {
            if !b.is_zero() {
                acc += BigRational::from_integer(binomial_big(m + 1, j)) * b;
            }
        }
        memo.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    memo[k].clone()
}

const EXACT_SCALED_MAX: usize = 60;

/// `B_k / k!` in double precision.
///
/// Small indices come from the exact table; beyond that the closed form
/// `B_{2j}/(2j)! = (-1)^{j+1} 2 ζ(2j) / (2π)^{2j}` avoids the huge intermediate values.
pub fn bernoulli_scaled(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut fact = BigInt::one();
        (0..=EXACT_SCALED_MAX)
            .map(|i| {
                if i > 0 {
                    fact *= BigInt::from(i);
                }
                (bernoulli_number(i) / BigRational::from_integer(fact.clone()))
                    .to_f64()
                    .unwrap_or(0.0)
            })
            .collect()
    });
    if k <= EXACT_SCALED_MAX {
        return table[k];
    }
    if k % 2 == 1 {
        return 0.0;
    }
    let kf = k as f64;
    let mut zeta = 1.0;
    for n in 2..64 {
        let t = (n as f64).powf(-kf);
        zeta += t;
        if t < 1e-18 {
            break;
        }
    }
    let sign = if (k / 2) % 2 == 1 { 1.0 } else { -1.0 };
    // (2π)^{-k} underflows gracefully to zero for very large k
    sign * 2.0 * zeta * (0.5 / PI).powi(k as i32)
}

/// `B_m(x) = sum_k binom(m,k) B_k x^{m-k}` with exact coefficients, evaluated in `T`.
pub fn bernoulli_polynomial_exact<T: Scalar>(m: usize, x: &T) -> T {
    // Horner over descending powers of x
    let mut acc = T::zero();
    for k in 0..=m {
        let c = BigRational::from_integer(binomial_big(m, k)) * bernoulli_number(k);
        acc = acc * x.clone() + T::from_rational(&c);
    }
    acc
}

/// Classical Bernoulli polynomial `B_m(x)`.
pub fn bernoulli_polynomial(m: usize, x: Complex64) -> Complex64 {
    if m <= 24 {
        return bernoulli_polynomial_exact(m, &x);
    }
    bernoulli_scaled_polynomial(m, x) * factorial(m)
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// `B_m(x) / m!`, bounded for `Re x` in `[-1/2, 1/2)` and shifted there with
/// `B_m(x+1)/m! - B_m(x)/m! = x^{m-1}/(m-1)!`.
pub fn bernoulli_scaled_polynomial(m: usize, x: Complex64) -> Complex64 {
    if m == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let shift = (x.re + 0.5).floor();
    let y = x - shift;
    // B_m(y)/m! = sum_k (B_k/k!) y^{m-k}/(m-k)!
    let mut base = Complex64::new(0.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0); // y^{j}/j!, j = m - k
    for j in 0..=m {
        if j > 0 {
            pw = pw * y / j as f64;
        }
        let b = bernoulli_scaled(m - j);
        if b != 0.0 {
            base += pw * b;
        }
        if pw.norm() == 0.0 {
            break;
        }
    }
    // walk from y to x one unit at a time
    let steps = shift as i64;
    let term = |w: Complex64| -> Complex64 {
        // w^{m-1}/(m-1)! in log form to stay finite
        if m == 1 {
            return Complex64::new(1.0, 0.0);
        }
        if w.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let lg = crate::special::ln_gamma_real(m as f64).map(|(l, _)| l).unwrap_or(0.0);
        (w.ln() * (m as f64 - 1.0) - lg).exp()
    };
    let mut acc = base;
    if steps > 0 {
        for i in 0..steps {
            acc += term(y + i as f64);
        }
    } else {
        for i in 0..(-steps) {
            acc -= term(y - 1.0 - i as f64);
        }
    }
    acc
}

/// Coefficients `[t^k] (t/(e^t-1))^σ e^{xt}` for `k < len`.
///
/// The Nørlund polynomial is `k!` times entry `k`.
pub fn norlund_series<T: Scalar>(sigma: &T, x: &T, len: usize) -> FormalSeries<T> {
    let base = FormalSeries::new(
        (0..len)
            .map(|k| {
                let mut fact = BigInt::one();
                for i in 1..=k {
                    fact *= BigInt::from(i);
                }
                T::from_rational(&(bernoulli_number(k) / BigRational::from_integer(fact)))
            })
            .collect(),
    );
    let log = base.log().expect("t/(e^t-1) has unit constant term");
    let mut expo = log.scale(sigma);
    if len > 1 {
        let c1 = expo.coeff(1) + x.clone();
        let mut c = expo.into_coeffs();
        c[1] = c1;
        expo = FormalSeries::new(c);
    }
    expo.exp().expect("exponent has zero constant term")
}

/// Bernoulli-Nørlund polynomial `B_k^{(σ)}(x)`.
pub fn norlund_polynomial<T: Scalar>(k: usize, sigma: &T, x: &T) -> T {
    let s = norlund_series(sigma, x, k + 1);
    let mut f = T::one();
    for i in 1..=k {
        f = f * T::from_i64(i as i64);
    }
    s.coeff(k) * f
}

/// Row `n` of the non-central Stirling numbers: coefficients of `x^l` in `(x+σ)_n`.
pub fn stirling_row<T: Scalar>(sigma: &T, n: usize) -> Vec<T> {
    let mut row = vec![T::one()];
    for j in 0..n {
        let c = sigma.clone() + T::from_i64(j as i64);
        let mut next = vec![T::zero(); row.len() + 1];
        for (l, v) in row.iter().enumerate() {
            next[l + 1] = next[l + 1].clone() + v.clone();
            next[l] = next[l].clone() + v.clone() * c.clone();
        }
        row = next;
    }
    row
}

/// `s_σ(n, l)` from the horizontal generating function.
pub fn noncentral_stirling_first<T: Scalar>(sigma: &T, n: usize, l: usize) -> Result<T> {
    if l > n {
        return Err(FwxError::Index(format!("l = {l} exceeds n = {n}")));
    }
    Ok(stirling_row(sigma, n)[l].clone())
}

/// `s_σ(n, l) = (-1)^{n-l} (l+1)_{n-l} / (n-l)! · B^{(n+1)}_{n-l}(1-σ)`.
pub fn noncentral_stirling_carlitz<T: Scalar>(sigma: &T, n: usize, l: usize) -> Result<T> {
    if l > n {
        return Err(FwxError::Index(format!("l = {l} exceeds n = {n}")));
    }
    let k = n - l;
    // (l+1)_k / k! * k! [t^k] = (l+1)_k [t^k]
    let mut rising = T::one();
    for i in 0..k {
        rising = rising * T::from_i64((l + 1 + i) as i64);
    }
    let s = norlund_series(&T::from_i64(n as i64 + 1), &(T::one() - sigma.clone()), k + 1);
    let v = rising * s.coeff(k);
    Ok(if k % 2 == 1 { -v } else { v })
}

fn for_each_partition(n: usize, max: usize, counts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if n == 0 {
        f(counts);
        return;
    }
    for part in (1..=max.min(n)).rev() {
        counts[part] += 1;
        for_each_partition(n - part, part, counts, f);
        counts[part] -= 1;
    }
}

/// Complete Bell polynomial `Y_n(x_1..x_n)` by the explicit partition sum.
pub fn bell_complete_partition<T: Scalar>(x: &[T]) -> T {
    let n = x.len();
    let fact = |k: usize| (1..=k).fold(T::one(), |a, i| a * T::from_i64(i as i64));
    let mut total = T::zero();
    let mut counts = vec![0usize; n + 1];
    for_each_partition(n, n, &mut counts, &mut |k| {
        let mut term = fact(n);
        for (i, &ki) in k.iter().enumerate().skip(1) {
            if ki == 0 {
                continue;
            }
            let base = x[i - 1].clone() / fact(i);
            for _ in 0..ki {
                term = term * base.clone();
            }
            term = term / fact(ki);
        }
        total = total.clone() + term;
    });
    total
}

/// Complete Bell polynomial via `n! [t^n] exp(sum_m x_m t^m / m!)`.
pub fn bell_complete<T: Scalar>(x: &[T]) -> T {
    let n = x.len();
    let mut coeffs = vec![T::zero(); n + 1];
    let mut fact = T::one();
    for m in 1..=n {
        fact = fact * T::from_i64(m as i64);
        coeffs[m] = x[m - 1].clone() / fact.clone();
    }
    FormalSeries::new(coeffs).exp().expect("zero constant term").coeff(n) * fact
}

/// `l_0..=l_r` from `q_1..q_r` by `l_r = (1/r) sum_m q_m l_{r-m}`.
pub fn l_from_q<T: Scalar>(q: &[T], r: usize) -> Vec<T> {
    let mut l = vec![T::one()];
    for k in 1..=r {
        let mut acc = T::zero();
        for m in 1..=k {
            acc = acc + q[m - 1].clone() * l[k - m].clone();
        }
        l.push(acc / T::from_i64(k as i64));
    }
    l
}

fn determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .max_by(|&a, &b| m[a][col].magnitude().total_cmp(&m[b][col].magnitude()));
        let Some(p) = pivot else {
            return T::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / pv.clone();
            for c in col..n {
                let v = m[col][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    det
}

/// `det(Ω_r)/r!` with `ω_{ij} = (i-1)! q_{i-j+1}/(j-1)!` on and below the
/// diagonal, `-1` on the superdiagonal and zero above it.
///
/// Conjugating by `diag((i-1)!)` and dividing row `i` by `i` absorbs the `r!`
/// and leaves `q_{i-j+1}/i` below the superdiagonal and `-1` on it, which
/// eliminates without the factorial growth of the raw entries.
pub fn nair_determinant<T: Scalar>(q: &[T], r: usize) -> Result<T> {
    if r == 0 {
        return Ok(T::one());
    }
    if q.len() < r {
        return Err(FwxError::Index(format!("need {r} q values, got {}", q.len())));
    }
    let mut m = vec![vec![T::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            if i >= j {
                m[i][j] = q[i - j].clone() / T::from_i64(i as i64 + 1);
            } else if j == i + 1 {
                m[i][j] = -T::one();
            }
        }
    }
    Ok(determinant(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bernoulli_numbers() {
        assert_eq!(bernoulli_number(0), q(1, 1));
        assert_eq!(bernoulli_number(1), q(-1, 2));
        assert_eq!(bernoulli_number(2), q(1, 6));
        assert_eq!(bernoulli_number(3), q(0, 1));
        assert_eq!(bernoulli_number(12), q(-691, 2730));
    }

    #[test]
    fn scaled_bernoulli_switches_smoothly() {
        // closed form past the table must match the exact ratio
        for k in [58usize, 62, 64, 81, 90] {
            let mut fact = BigInt::one();
            for i in 1..=k {
                fact *= BigInt::from(i);
            }
            let exact = (bernoulli_number(k) / BigRational::from_integer(fact)).to_f64().unwrap();
            let got = bernoulli_scaled(k);
            assert!((exact - got).abs() <= 1e-14 * exact.abs().max(1e-300), "k={k} {exact:e} {got:e}");
        }
    }

    #[test]
    fn bernoulli_polynomial_values() {
        assert_eq!(bernoulli_polynomial(1, c(0.0, 0.0)), c(-0.5, 0.0));
        assert!((bernoulli_polynomial(2, c(0.0, 0.0)) - c(1.0 / 6.0, 0.0)).norm() < 1e-16);
        assert!(bernoulli_polynomial(3, c(0.5, 0.0)).norm() < 1e-16);
        assert_eq!(bernoulli_polynomial_exact(3, &q(1, 2)), q(0, 1));
    }

    #[test]
    fn scaled_polynomial_matches_exact() {
        for &x in &[c(0.3, 0.0), c(2.7, -0.4), c(-1.6, 0.2), c(0.0, 0.0)] {
            for m in [1usize, 2, 5, 11, 20] {
                let exact = bernoulli_polynomial_exact(m, &x) / factorial(m);
                let scaled = bernoulli_scaled_polynomial(m, x);
                assert!((exact - scaled).norm() <= 1e-12 * exact.norm().max(1e-3), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn norlund_low_order() {
        let s = q(7, 3);
        let x = q(-2, 5);
        assert_eq!(norlund_polynomial(0, &s, &x), q(1, 1));
        assert_eq!(norlund_polynomial(1, &s, &x), x.clone() - s.clone() / q(2, 1));
        for k in 0..8 {
            assert_eq!(norlund_polynomial(k, &q(1, 1), &x), bernoulli_polynomial_exact(k, &x));
        }
    }

    #[test]
    fn norlund_truncation_is_stable() {
        let s = c(0.7, 0.2);
        let x = c(-0.3, 0.0);
        let short = norlund_series(&s, &x, 9);
        let long = norlund_series(&s, &x, 14);
        for k in 0..9 {
            assert!((short.coeff(k) - long.coeff(k)).norm() <= 1e-15 * long.coeff(k).norm().max(1e-300));
        }
    }

    #[test]
    fn stirling_small_cases() {
        let s = q(3, 7);
        assert_eq!(noncentral_stirling_first(&s, 1, 0).unwrap(), s.clone());
        assert_eq!(noncentral_stirling_first(&s, 1, 1).unwrap(), q(1, 1));
        assert_eq!(noncentral_stirling_first(&q(0, 1), 3, 1).unwrap(), q(2, 1));
        assert_eq!(noncentral_stirling_first(&s, 0, 0).unwrap(), q(1, 1));
        assert!(matches!(noncentral_stirling_first(&s, 2, 3), Err(FwxError::Index(_))));
    }

    #[test]
    fn stirling_carlitz_exact_agreement() {
        let s = q(-5, 4);
        for n in 0..9 {
            for l in 0..=n {
                assert_eq!(
                    noncentral_stirling_first(&s, n, l).unwrap(),
                    noncentral_stirling_carlitz(&s, n, l).unwrap(),
                    "n={n} l={l}"
                );
            }
        }
    }

    #[test]
    fn bell_small_cases() {
        let x = [q(2, 1), q(3, 1), q(5, 1)];
        assert_eq!(bell_complete(&x[..1]), q(2, 1));
        assert_eq!(bell_complete(&x[..2]), q(7, 1));
        assert_eq!(bell_complete(&x), q(8 + 18 + 5, 1));
        assert_eq!(bell_complete_partition(&x), q(31, 1));
    }

    #[test]
    fn nair_small_cases() {
        let qs = [q(1, 3), q(-2, 5), q(7, 4), q(1, 9)];
        assert_eq!(nair_determinant(&qs, 1).unwrap(), qs[0].clone());
        let two = (qs[0].clone() * qs[0].clone() + qs[1].clone()) / q(2, 1);
        assert_eq!(nair_determinant(&qs, 2).unwrap(), two);
        let l = l_from_q(&qs, 4);
        for r in 1..=4 {
            assert_eq!(nair_determinant(&qs, r).unwrap(), l[r]);
        }
    }

    #[test]
    fn nair_large_entries_stay_accurate() {
        // q_m growing like 3^m, where the unscaled matrix lost ~5 digits by r = 12
        let qs: Vec<Complex64> = (1..=12).map(|m| c(1.7 * 2.9f64.powi(m), 0.3 * (-1f64).powi(m))).collect();
        let l = l_from_q(&qs, 12);
        for r in 1..=12 {
            let d = nair_determinant(&qs, r).unwrap();
            assert!((d - l[r]).norm() < 1e-13 * l[r].norm(), "r = {r}: {d} vs {}", l[r]);
        }
    }
}
