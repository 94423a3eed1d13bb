//! Invariant battery behind `fwx selftest`.
//!
//! Every check reduces to a measured discrepancy and a limit; the margin is
//! their ratio and a check passes when it is at most 1.

use std::f64::consts::PI;
use std::io::Write;

use fwx_core::engine::{
    coeff_r, coeff_r_theta, coeff_w_estimate, h_series, l_r, q_m, v_n, v_n_norlund, Estimate,
};
use fwx_core::poly::{bell_complete, l_from_q, nair_determinant};
use fwx_core::special::gamma_real;
use fwx_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Format, ParamArgs, SelftestArgs};
use crate::output::{field, num, write_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub set: String,
    pub check: &'static str,
    pub status: Status,
    pub measure: f64,
    pub limit: f64,
    pub margin: f64,
    pub note: String,
}

enum Outcome {
    Measured(f64, String),
    NotApplicable(String),
}

type CheckResult = std::result::Result<Outcome, FwxError>;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Differences over `(got, want, floor)`, scaled by the running maximum of
/// `|want|` or `floor` if larger, so that an entry passing close to zero is
/// not judged by its own size.
fn scaled_worst(items: &[(Complex64, Complex64, f64)]) -> f64 {
    let mut scale: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for &(got, want, floor) in items {
        scale = scale.max(want.norm());
        worst = worst.max((got - want).norm() / scale.max(floor).max(f64::MIN_POSITIVE));
    }
    worst
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn is_gauss(ps: &ParameterSet) -> bool {
    ps.p() == 2 && ps.q() == 1 && ps.big_a().iter().chain(ps.big_b()).all(|&s| s == 1.0) && ps.is_real()
}

fn triple_l(ps: &ParameterSet) -> CheckResult {
    let sigma = ps.choose_sigma(None)?;
    let q: Vec<Complex64> = (1..=12).map(|m| q_m(ps, sigma, m)).collect::<Result<_>>()?;
    let rec = l_from_q(&q, 12);
    let mut items = Vec::new();
    for r in 1..=12 {
        // size of the terms cancelling in l_r = (1/r) sum q_m l_{r-m}
        let mass = (1..=r).map(|m| q[m - 1].norm() * rec[r - m].norm()).sum::<f64>() / r as f64;
        let x: Vec<Complex64> = (1..=r).map(|m| q[m - 1] * factorial(m - 1)).collect();
        items.push((bell_complete(&x) / factorial(r), rec[r], mass));
        items.push((nair_determinant(&q, r)?, rec[r], mass));
        items.push((l_r(ps, sigma, r)?, rec[r], mass));
    }
    Ok(Outcome::Measured(
        scaled_worst(&items),
        "r <= 12, relative to max |l_k| and the recursion's term sizes".into(),
    ))
}

fn dual_v(ps: &ParameterSet) -> CheckResult {
    let sigma = ps.choose_sigma(None)?;
    let pairs = (0..=30)
        .map(|n| Ok((v_n_norlund(ps, sigma, 0.0, n)?, v_n(ps, sigma, 0.0, n)?, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::Measured(scaled_worst(&pairs), "n <= 30, relative to max |V_k|, k <= n".into()))
}

/// Disagreement between `θ` values, in units of the larger of `1e-9`
/// relative and the two error estimates combined: for sets with negative `μ`
/// the high coefficients are noise limited well above `1e-9`.
fn theta_invariance(ps: &ParameterSet) -> CheckResult {
    if ps.integer_mu().is_some() {
        return Ok(Outcome::NotApplicable("integer mu".into()));
    }
    let sigma = ps.expansion_sigma();
    let mut worst: f64 = 0.0;
    let mut score = |a: &Estimate, b: &Estimate| {
        let allowed = (1e-9 * b.value.norm()).max(a.err + b.err);
        worst = worst.max((a.value - b.value).norm() / allowed);
    };
    for m in 0..=10 {
        let r0 = coeff_r(ps, sigma, m)?;
        let w0 = coeff_w_estimate(ps, sigma, 0.0, m, 1e-12)?;
        for theta in [0.3, 1.0] {
            score(&coeff_r_theta(ps, sigma, theta, m)?, &r0);
            score(&coeff_w_estimate(ps, sigma, theta, m, 1e-12)?, &w0);
        }
    }
    Ok(Outcome::Measured(
        worst,
        "R_m, W_m, m <= 10, theta in {0.3, 1}; in units of max(1e-9 rel, error estimate)".into(),
    ))
}

fn overlap(ps: &ParameterSet) -> CheckResult {
    let series = EvalOptions::default().with_tol(1e-12).with_max_terms(2_000_000);
    let expansion = EvalOptions::default().with_tol(1e-9);
    let e = Complex64::from_polar(0.65, PI / 8.0);
    let mut worst: f64 = 0.0;
    for zeta in [Complex64::new(0.7, 0.0), e, e.conj()] {
        let m = eval_maclaurin(ps, zeta * ps.rho(), &series)?.value;
        let s = eval_singular_expansion(ps, zeta, &expansion)?.value;
        worst = worst.max(rel(s, m));
    }
    let mut note = "Maclaurin and singular inside".to_string();
    for zeta in [Complex64::new(1.2, 0.3), Complex64::new(1.2, -0.3)] {
        match eval_residue_series(ps, zeta * ps.rho(), &expansion) {
            Ok(r) => {
                let s = eval_singular_expansion(ps, zeta, &expansion)?.value;
                worst = worst.max(rel(r.value, s));
            }
            // coincident exponents: the residue form does not apply
            Err(FwxError::PoleCollision { .. }) => {
                note = "Maclaurin and singular inside; residue form n/a".into();
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if !note.ends_with("n/a") {
        note.push_str("; residue and singular outside");
    }
    Ok(Outcome::Measured(worst, note))
}

fn schwarz(ps: &ParameterSet) -> CheckResult {
    if !ps.is_real() {
        return Ok(Outcome::NotApplicable("complex parameters".into()));
    }
    let opts = EvalOptions::default().with_tol(1e-12);
    let mut worst: f64 = 0.0;
    // Maclaurin and singular regions, which every valid set supports
    for zeta in [Complex64::new(0.4, 0.5), Complex64::new(-0.5, 0.6), Complex64::new(0.95, 0.1), Complex64::new(1.2, 0.3)] {
        let z = zeta * ps.rho();
        let up = eval_auto(ps, z, &opts)?.value;
        let down = eval_auto(ps, z.conj(), &opts)?.value;
        worst = worst.max(rel(down, up.conj()));
    }
    Ok(Outcome::Measured(worst, "4 points".into()))
}

fn gauss(ps: &ParameterSet) -> CheckResult {
    if !is_gauss(ps) {
        return Ok(Outcome::NotApplicable("not a Gauss-type set".into()));
    }
    let (a, b, c) = (ps.a()[0].re, ps.a()[1].re, ps.b()[0].re);
    if c - a - b <= 0.0 {
        return Ok(Outcome::NotApplicable("c - a - b <= 0".into()));
    }
    let want = gamma_real(a)? * gamma_real(b)? * gamma_real(c - a - b)? / (gamma_real(c - a)? * gamma_real(c - b)?);
    let got = eval_at_rho(ps, &EvalOptions::default().with_tol(1e-10))?.value;
    Ok(Outcome::Measured(rel(got, Complex64::new(want, 0.0)), "value at rho".into()))
}

fn jump_consistency(ps: &ParameterSet) -> CheckResult {
    if !ps.is_real() {
        return Ok(Outcome::NotApplicable("complex parameters".into()));
    }
    // the identity holds for sigma = 1, which needs Re(mu) > -1
    if ps.mu().re + 1.0 <= 0.0 {
        return Ok(Outcome::NotApplicable("Re(mu) <= -1".into()));
    }
    let opts = EvalOptions::default().with_tol(1e-10);
    let mut worst: f64 = 0.0;
    for ratio in [1.25, 2.0, 4.0] {
        let x = ratio * ps.rho();
        let jump = match jump_on_cut(ps, x, &opts) {
            Ok(j) => j,
            Err(FwxError::PoleCollision { .. }) => {
                return Ok(Outcome::NotApplicable("coincident exponents".into()));
            }
            Err(e) => return Err(e),
        };
        let h = h_series(ps, 1.0, 0.0, Complex64::new(1.0 / ratio, 0.0), 1e-10)?.value;
        worst = worst.max(rel(jump, Complex64::new(0.0, 2.0 * PI) * h));
    }
    Ok(Outcome::Measured(worst, "x/rho in {1.25, 2, 4}".into()))
}

type Check = (&'static str, f64, fn(&ParameterSet) -> CheckResult);

const CHECKS: [Check; 7] = [
    ("triple-l", 1e-12, triple_l),
    ("dual-v", 1e-10, dual_v),
    ("theta-invariance", 1.0, theta_invariance),
    ("overlap", 1e-7, overlap),
    ("schwarz", 1e-12, schwarz),
    ("gauss", 1e-9, gauss),
    ("jump-consistency", 1e-7, jump_consistency),
];

/// Runs the battery on one set.
pub fn check_set(name: &str, ps: &ParameterSet) -> Vec<CheckRecord> {
    CHECKS
        .iter()
        .map(|&(check, limit, f)| {
            let (status, measure, note) = match f(ps) {
                Ok(Outcome::Measured(m, note)) if m <= limit => (Status::Pass, m, note),
                Ok(Outcome::Measured(m, note)) => (Status::Fail, m, note),
                Ok(Outcome::NotApplicable(note)) => (Status::Skip, f64::NAN, note),
                Err(e) => (Status::Fail, f64::NAN, e.to_string()),
            };
            CheckRecord {
                set: name.to_string(),
                check,
                status,
                measure,
                limit,
                margin: measure / limit,
                note,
            }
        })
        .collect()
}

/// Random Gauss-type sets with `c - a - b` in `[0.1, 1.5]` and `a - b` kept
/// away from the integers, where the residue form has coincident exponents.
pub fn random_gauss(seed: u64, count: usize) -> Vec<(String, ParameterSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::with_capacity(count);
    while sets.len() < count {
        let a: f64 = rng.gen_range(0.2..=1.5);
        let b: f64 = rng.gen_range(0.2..=1.5);
        let c = a + b + rng.gen_range(0.1..=1.5);
        let d = a - b;
        if (d - d.round()).abs() < 0.05 {
            continue;
        }
        if let Ok(ps) = ParameterSet::gauss(a, b, c) {
            sets.push((format!("gauss({a},{b},{c})"), ps));
        }
    }
    sets
}

fn builtin() -> Vec<(String, ParameterSet)> {
    vec![
        ("gauss(0.5,0.7,1.3)".into(), ParameterSet::gauss(0.5, 0.7, 1.3).expect("valid")),
        (
            "mixed".into(),
            ParameterSet::real(&[0.35, 0.6], &[0.5, 1.0], &[0.9], &[0.5]).expect("valid"),
        ),
        ("half-scale".into(), ParameterSet::real(&[1.0, 1.0], &[0.5, 0.5], &[], &[]).expect("valid")),
    ]
}

fn write_record(out: &mut dyn Write, format: Format, r: &CheckRecord) -> std::io::Result<()> {
    match format {
        Format::Json => write_json(out, r),
        Format::Csv => writeln!(
            out,
            "{},{},{},{},{},{},{}",
            field(&r.set),
            r.check,
            match r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip => "skip",
            },
            num(r.measure),
            num(r.limit),
            num(r.margin),
            field(&r.note)
        ),
    }
}

#[derive(Serialize)]
struct Summary {
    passed: usize,
    failed: usize,
    skipped: usize,
}

pub fn run(a: &SelftestArgs, out: &mut dyn Write) -> std::io::Result<i32> {
    let format = a.format.unwrap_or(Format::Csv);
    if format == Format::Csv {
        writeln!(out, "set,check,status,measure,limit,margin,note")?;
    }
    let mut records = Vec::new();
    let mut sets = builtin();
    sets.extend(random_gauss(a.seed, a.random));
    if let (Some(pa), Some(pb)) = (&a.a, &a.big_a) {
        let args = ParamArgs {
            a: pa.clone(),
            big_a: pb.clone(),
            b: a.b.clone().unwrap_or_default(),
            big_b: a.big_b.clone().unwrap_or_default(),
        };
        match crate::build_params(&args) {
            Ok(ps) => sets.push(("custom".into(), ps)),
            Err(e) => records.push(CheckRecord {
                set: "custom".into(),
                check: "validation",
                status: Status::Fail,
                measure: f64::NAN,
                limit: f64::NAN,
                margin: f64::NAN,
                note: e.to_string(),
            }),
        }
    }
    for r in &records {
        write_record(out, format, r)?;
    }
    for (name, ps) in &sets {
        for r in check_set(name, ps) {
            write_record(out, format, &r)?;
            records.push(r);
        }
    }
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skip),
    };
    match format {
        Format::Json => write_json(out, &summary)?,
        Format::Csv => writeln!(
            out,
            "summary,,{},,,,{} passed {} failed {} skipped",
            if summary.failed == 0 { "pass" } else { "fail" },
            summary.passed,
            summary.failed,
            summary.skipped
        )?,
    }
    Ok(if summary.failed == 0 { 0 } else { 1 })
}
