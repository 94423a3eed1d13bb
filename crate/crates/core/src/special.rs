//! Gamma-family kernels on the complex plane.
//!
//! `log_gamma` is the principal branch: analytic on `C \ (-inf, 0]`, real on the
//! positive axis. Arguments are shifted up by the recurrence until the real
//! part reaches [`SHIFT_TARGET`], then the Stirling series is summed.
//! Reciprocal gamma and digamma use reflection on the left half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{FwxError, Result};

/// Absolute distance to a non-positive integer below which an argument counts as a pole.
pub const POLE_TOL: f64 = 1e-12;

const SHIFT_TARGET: f64 = 15.0;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2k} for k = 1..=15.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Returns `Some(-n)` when `z` lies within [`POLE_TOL`] of the non-positive integer `-n`.
pub fn nearest_pole(z: Complex64) -> Option<i64> {
    if z.re > 0.5 || z.im.abs() >= POLE_TOL {
        return None;
    }
    let r = z.re.round();
    if r <= 0.0 && (z - c(r)).norm() < POLE_TOL {
        Some(r as i64)
    } else {
        None
    }
}

fn check_pole(z: Complex64) -> Result<()> {
    match nearest_pole(z) {
        Some(_) => Err(FwxError::Pole(z)),
        None => Ok(()),
    }
}

fn shift_count(re: f64) -> usize {
    if re >= SHIFT_TARGET {
        0
    } else {
        (SHIFT_TARGET - re).ceil() as usize
    }
}

fn stirling_ln_gamma(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(11) {
        let k = (k + 1) as f64;
        corr += pow * (b / (2.0 * k * (2.0 * k - 1.0)));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr
}

/// Principal branch of `ln Γ(z)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let n = shift_count(z.re);
    let mut shift = Complex64::new(0.0, 0.0);
    for k in 0..n {
        shift += (z + k as f64).ln();
    }
    Ok(stirling_ln_gamma(z + n as f64) - shift)
}

/// `ln sin(πz)` modulo `2πi`, without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    let i = Complex64::new(0.0, 1.0);
    if w.im.abs() < 30.0 {
        w.sin().ln()
    } else if w.im > 0.0 {
        // sin w = e^{-iw} (1 - e^{2iw}) i/2
        -i * w + (i * 0.5).ln() + (Complex64::new(1.0, 0.0) - (i * w * 2.0).exp()).ln()
    } else {
        i * w + (-i * 0.5).ln() + (Complex64::new(1.0, 0.0) - (-i * w * 2.0).exp()).ln()
    }
}

/// `ln Γ(z)` modulo `2πi`, accurate on the whole plane minus the poles.
///
/// Unlike [`log_gamma`] the imaginary part is not the principal branch; use it
/// only where the result is exponentiated. Reflection keeps large negative
/// arguments accurate.
pub fn log_gamma_any(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        return log_gamma(z);
    }
    Ok(c(PI.ln()) - ln_sin_pi(z) - log_gamma(Complex64::new(1.0, 0.0) - z)?)
}

/// `ln |Γ(x)|` and the sign of `Γ(x)` for real `x`.
pub fn ln_gamma_real(x: f64) -> Result<(f64, f64)> {
    check_pole(c(x))?;
    if x < 0.5 {
        // Γ(x) Γ(1-x) = π / sin(πx)
        let s = (PI * x).sin();
        let (lg, sg) = ln_gamma_real(1.0 - x)?;
        return Ok((PI.ln() - s.abs().ln() - lg, s.signum() * sg));
    }
    let n = shift_count(x);
    let prod: f64 = (0..n).map(|k| x + k as f64).product();
    Ok((stirling_ln_gamma(c(x + n as f64)).re - prod.ln(), 1.0))
}

pub fn gamma_real(x: f64) -> Result<f64> {
    check_pole(c(x))?;
    if x > 0.0 && x <= 171.0 && x.fract() == 0.0 {
        return Ok((1..x as u32).fold(1.0, |acc, k| acc * k as f64));
    }
    let (lg, sg) = ln_gamma_real(x)?;
    Ok(sg * lg.exp())
}

/// `1/Γ(x)` for real `x`; exactly zero at the poles of Γ.
pub fn rgamma_real(x: f64) -> f64 {
    if nearest_pole(c(x)).is_some() {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        let (lg, sg) = ln_gamma_real(1.0 - x).expect("1-x is not a pole");
        return (PI * x).sin() * sg * lg.exp() / PI;
    }
    let (lg, sg) = ln_gamma_real(x).expect("x > 0.5 is not a pole");
    sg * (-lg).exp()
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return gamma_real(z.re).map(c);
    }
    Ok(log_gamma(z)?.exp())
}

/// Reciprocal gamma, entire.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return c(rgamma_real(z.re));
    }
    if z.re < 0.5 {
        let lg = log_gamma(Complex64::new(1.0, 0.0) - z).expect("off-axis argument");
        return (z * PI).sin() * lg.exp() / PI;
    }
    (-log_gamma(z).expect("off-axis argument")).exp()
}

/// `ψ(z) = Γ'(z)/Γ(z)`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.0 {
        // ψ(z) = ψ(1-z) - π cot(πz)
        let pz = z * PI;
        let cot = pz.cos() / pz.sin();
        return Ok(digamma(Complex64::new(1.0, 0.0) - z)? - cot * PI);
    }
    let n = shift_count(z.re);
    let mut shift = Complex64::new(0.0, 0.0);
    for k in 0..n {
        shift += (z + k as f64).inv();
    }
    let w = z + n as f64;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(11) {
        corr += pow * (b / (2.0 * (k + 1) as f64));
        pow *= inv2;
    }
    Ok(w.ln() - inv * 0.5 - corr - shift)
}

/// Polygamma `ψ^(k)(z)` for `k >= 0`.
pub fn polygamma(k: u32, z: Complex64) -> Result<Complex64> {
    if k == 0 {
        return digamma(z);
    }
    check_pole(z)?;
    let kf = k as f64;
    let k_fact: f64 = (1..=k).map(|i| i as f64).product();
    let target = 20.0 + 2.0 * kf;
    let n = if z.re >= target { 0 } else { (target - z.re).ceil() as usize };
    let mut shift = Complex64::new(0.0, 0.0);
    for j in 0..n {
        shift += (z + j as f64).powi(-(k as i32) - 1);
    }
    let w = z + n as f64;
    let inv = w.inv();
    // (k-1)!/w^k + k!/(2 w^{k+1}) + sum_j B_{2j} (2j+k-1)!/((2j)! w^{2j+k})
    let mut asym = inv.powi(k as i32) * (k_fact / kf) + inv.powi(k as i32 + 1) * (k_fact / 2.0);
    let inv2 = inv * inv;
    let mut pow = inv.powi(k as i32) * inv2;
    // ratio (2j+k-1)!/(2j)! built incrementally
    let mut ratio = k_fact * (kf + 1.0) / 2.0; // j = 1: (k+1)!/2!
    for (j, b) in BERNOULLI_EVEN.iter().enumerate().take(12) {
        let j = (j + 1) as f64;
        if j > 1.0 {
            ratio *= (2.0 * j + kf - 2.0) * (2.0 * j + kf - 1.0) / ((2.0 * j - 1.0) * (2.0 * j));
        }
        asym += pow * (b * ratio);
        pow *= inv2;
    }
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    Ok((asym + shift * k_fact) * sign)
}

/// Pochhammer symbol `(a)_n = a (a+1) ... (a+n-1)`.
pub fn rising_factorial(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}
