//! Reference values and closed forms shared by the integration tests.
//!
//! Frozen values come from mpmath at 40 digits.
#![allow(dead_code)]

use fwx_core::special::gamma_real;
use fwx_core::{Complex64, ParameterSet};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

/// `(name, a, b, c, z, Γ(a)Γ(b)/Γ(c) ₂F₁(a, b; c; z))`
pub const GAUSS_VALUES: &[(&str, f64, f64, f64, (f64, f64), (f64, f64))] = &[
    ("inside", 0.5, 0.7, 1.3, (0.3, 0.0), (2.8142224411423935237, 0.0)),
    ("negative", 0.5, 0.7, 1.3, (-2.0, 0.0), (1.8586383404695254173, 0.0)),
    ("near-rho", 0.5, 0.7, 1.3, (1.2, 0.3), (3.2322418773734889827, 1.6859217570560085842)),
    ("overlap", 0.3, 0.4, 1.5, (0.7, 0.0), (8.0881409739028660419, 0.0)),
    ("lower-bank", 0.3, 0.4, 1.5, (1.2, -0.3), (8.4243606306365473824, -0.88686918271209538157)),
];

/// `Σ Γ(1 + n/2)² zⁿ/n!`, the set `a = (1, 1)`, `A = (1/2, 1/2)`, no lower
/// parameters, `ρ = 2`; `(z, value)`
pub const HALF_SCALE_VALUES: &[((f64, f64), (f64, f64))] = &[
    ((1.4, 0.0), (6.4700587037825931618, 0.0)),
    ((2.4, 0.6), (-5.0978400121031539669, -0.80871690733941962037)),
    ((1.6, 0.5), (1.153342830580169206, 5.7977200017535377631)),
];

/// Gauss set `(0.5, 0.7; 1.3)` on the cut: `(x, Im jump, average)`
pub const GAUSS_CUT: &[(f64, f64, f64)] = &[
    (2.0, 4.8475840930021677666, 2.139915051760910345),
    (3.0, 4.3086973082458768597, 1.5149867149724960283),
];

/// `Γ(.8)Γ(1.2)Γ(.5)/(Γ(1.7)Γ(1.4)) ₃F₂(.8, 1.2, .5; 1.7, 1.4; 1)`
pub const SAALSCHUTZ_FREE_3F2: f64 = 3.8835349823356433389;

/// `Σ_{n≥1} V_n/n` for `a = (1/2, 1/2)`, `b = (1)`: `4 ln 2`
pub const ZERO_BALANCED_SUM: f64 = 2.7725887222397812377;

pub fn half_scale() -> ParameterSet {
    ParameterSet::real(&[1.0, 1.0], &[0.5, 0.5], &[], &[]).unwrap()
}

pub fn mixed_scale() -> ParameterSet {
    ParameterSet::real(&[0.35, 0.6], &[0.5, 1.0], &[0.9], &[0.5]).unwrap()
}

pub fn gamma(x: f64) -> f64 {
    gamma_real(x).unwrap()
}

/// `₂F₁(a, b; c; x)` for real `x <= 0.8`, through the Pfaff transform when
/// `x < 0` so the series argument stays in `[0, 0.8]`.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> f64 {
    assert!((-4.0..=0.8).contains(&x));
    if x < 0.0 {
        let y = x / (x - 1.0);
        return (1.0 - x).powf(-a) * hyp2f1(a, c - b, c, y);
    }
    let (mut term, mut sum) = (1.0f64, 0.0f64);
    for n in 0..2000 {
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
    }
    sum
}

/// Gauss summation `Γ(a)Γ(b)Γ(c-a-b)/(Γ(c-a)Γ(c-b))`, the value at `z = 1`.
pub fn gauss_sum(a: f64, b: f64, c: f64) -> f64 {
    gamma(a) * gamma(b) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b))
}

/// Jump of `Γ(a)Γ(b)/Γ(c) ₂F₁` across `x > 1`, from the connection formula:
/// `2πi (x-1)^λ ₂F₁(c-a, c-b; λ+1; 1-x)/Γ(λ+1)`, `λ = c - a - b`.
pub fn gauss_jump(a: f64, b: f64, c: f64, x: f64) -> Complex64 {
    let lam = c - a - b;
    let v = (x - 1.0).powf(lam) * hyp2f1(c - a, c - b, lam + 1.0, 1.0 - x) / gamma(lam + 1.0);
    Complex64::new(0.0, 2.0 * std::f64::consts::PI * v)
}

/// First-order Richardson limit from values at `ε` and `ε/10`.
pub fn richardson(coarse: Complex64, fine: Complex64) -> Complex64 {
    (fine * 10.0 - coarse) / 9.0
}
