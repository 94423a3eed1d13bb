use std::f64::consts::PI;

use num_complex::Complex64;

use super::{on_cut, CutValues, EvalOptions, EvalResult, Representation};
use crate::engine::tail::pole_clusters;
use crate::error::{FwxError, Result};
use crate::params::ParameterSet;
use crate::special::{log_gamma_any, nearest_pole};

const SPAN: usize = 8;

/// One residue `D_{n,k} Γ(u)` and its exponent `u = (a_k + n)/A_k`, in log form.
struct Residue {
    u: Complex64,
    /// `ln D_{n,k}`; `None` when `D` vanishes
    ln_d: Option<Complex64>,
}

/// `D_{n,k} = (-1)^n/(A_k n!) Π_{i≠k} Γ(a_i - A_i u) / Π_j Γ(b_j - B_j u)`.
fn residue(ps: &ParameterSet, k: usize, n: usize) -> Result<Residue> {
    let (a, big_a) = (ps.a(), ps.big_a());
    let u = (a[k] + n as f64) / big_a[k];
    let mut ln = -Complex64::new(big_a[k].ln(), 0.0) - log_gamma_any(Complex64::new(n as f64 + 1.0, 0.0))?;
    if n % 2 == 1 {
        ln += Complex64::new(0.0, PI);
    }
    for (i, (ai, si)) in a.iter().zip(big_a).enumerate() {
        if i != k {
            // a pole here means two exponents coincide
            ln += log_gamma_any(ai - u * si).map_err(|_| FwxError::PoleCollision {
                first: format!("(a_{k} + {n})/A_{k}"),
                second: format!("a pole of Gamma(a_{i} - A_{i} u)"),
            })?;
        }
    }
    for (bj, sj) in ps.b().iter().zip(ps.big_b()) {
        let x = bj - u * sj;
        if nearest_pole(x).is_some() {
            return Ok(Residue { u, ln_d: None });
        }
        ln -= log_gamma_any(x)?;
    }
    Ok(Residue { u, ln_d: Some(ln) })
}

/// Rejects coincident exponents among the first `counts[k]` poles of each `k`.
fn check_collisions(ps: &ParameterSet, counts: &[usize]) -> Result<()> {
    let (a, big_a) = (ps.a(), ps.big_a());
    let re_max = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| ((a[k] + c as f64) / big_a[k]).re)
        .fold(f64::NEG_INFINITY, f64::max);
    for cl in pole_clusters(a, big_a, re_max) {
        if cl.multiplicity() > 1 {
            let (k1, n1) = cl.members[0];
            let (k2, n2) = cl.members[1];
            return Err(FwxError::PoleCollision {
                first: format!("(a_{k1} + {n1})/A_{k1}"),
                second: format!("(a_{k2} + {n2})/A_{k2}"),
            });
        }
    }
    Ok(())
}

/// Sums `Σ_{k,n} D_{n,k} f(u)` where `ln f(u)` is supplied; each `k` stream
/// stops when its geometric tail drops below `tol` relative to the running total.
fn residue_sum(
    ps: &ParameterSet,
    opts: &EvalOptions,
    ratio: f64,
    ln_f: impl Fn(Complex64) -> Option<Complex64>,
) -> Result<(Complex64, f64, usize)> {
    let p = ps.p();
    let mut streams: Vec<Vec<Complex64>> = vec![Vec::new(); p];
    let mut total = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    let mut tails = vec![f64::INFINITY; p];
    let mut counts = vec![0usize; p];
    let mut terms = 0;
    loop {
        let mut active = false;
        for k in 0..p {
            if tails[k] <= opts.tol * total.norm() * 0.5 / p as f64 {
                continue;
            }
            active = true;
            if counts[k] >= opts.max_terms {
                return Err(FwxError::Tolerance {
                    requested: opts.tol,
                    achieved: tails.iter().sum::<f64>() / total.norm().max(f64::MIN_POSITIVE),
                    terms,
                });
            }
            // advance stream k by a block
            for _ in 0..SPAN {
                let n = counts[k];
                let r = residue(ps, k, n)?;
                let t = match r.ln_d {
                    Some(ld) => match ln_f(r.u) {
                        Some(lf) => (ld + lf).exp(),
                        None => Complex64::new(0.0, 0.0),
                    },
                    None => Complex64::new(0.0, 0.0),
                };
                if !t.is_finite() {
                    return Err(FwxError::Domain(format!("residue term {n} of stream {k} overflowed")));
                }
                total += t;
                mass += t.norm();
                streams[k].push(t);
                counts[k] += 1;
                terms += 1;
            }
            tails[k] = stream_tail(&streams[k], ratio.powf(1.0 / ps.big_a()[k]));
        }
        if !active {
            break;
        }
    }
    check_collisions(ps, &counts)?;
    let err = tails.iter().sum::<f64>() + 4.0 * f64::EPSILON * mass;
    Ok((total, err, terms))
}

/// Geometric tail bound for one stream whose ratio tends to `floor`.
fn stream_tail(s: &[Complex64], floor: f64) -> f64 {
    let n = s.len();
    if n < 2 * SPAN {
        return f64::INFINITY;
    }
    let recent: Vec<f64> = s[n - SPAN..].iter().map(|t| t.norm()).collect();
    let env = recent.iter().copied().fold(0.0, f64::max);
    if env == 0.0 {
        // vanishing residues, e.g. cancelled by a lower-parameter pole
        let older = s[n - 2 * SPAN..n - SPAN].iter().map(|t| t.norm()).fold(0.0, f64::max);
        return if older == 0.0 { 0.0 } else { f64::INFINITY };
    }
    let older = s[n - 2 * SPAN..n - SPAN].iter().map(|t| t.norm()).fold(0.0, f64::max);
    let q = if older > 0.0 { (env / older).powf(1.0 / SPAN as f64) } else { 1.0 };
    let q = q.max(floor);
    if q >= 1.0 {
        return f64::INFINITY;
    }
    env * q / (1.0 - q)
}

fn simple_poles_only(ps: &ParameterSet) -> Result<()> {
    // a collision anywhere shows up within the first few periods
    let counts: Vec<usize> = ps.big_a().iter().map(|s| (8.0 * s.max(1.0)).ceil() as usize + 8).collect();
    check_collisions(ps, &counts)
}

/// Residue (inverse-power) series for `|z| > ρ` off the cut.
pub fn eval_residue_series(ps: &ParameterSet, z: Complex64, opts: &EvalOptions) -> Result<EvalResult> {
    opts.validate()?;
    if on_cut(ps, z) {
        return Err(FwxError::Cut(z));
    }
    let r = z.norm() / ps.rho();
    if !(r.is_finite()) || r < 1.0 || (r == 1.0 && ps.mu().re <= 0.0) {
        return Err(FwxError::Domain(format!("|z|/rho = {r} must exceed 1 for the residue series")));
    }
    simple_poles_only(ps)?;
    let ln_mz = (-z).ln();
    let (value, err, terms) = residue_sum(ps, opts, 1.0 / r, |u| {
        if nearest_pole(u).is_some() {
            return None;
        }
        Some(log_gamma_any(u).ok()? - u * ln_mz)
    })?;
    Ok(EvalResult {
        value,
        representation: Representation::Residue,
        terms_used: terms,
        err_estimate: err,
        warnings: Vec::new(),
    })
}

fn cut_precheck(ps: &ParameterSet, x: f64) -> Result<()> {
    if !ps.is_real() {
        return Err(FwxError::Domain("cut values require real parameter vectors".into()));
    }
    if !(x.is_finite() && x > ps.rho()) {
        return Err(FwxError::Domain(format!("x = {x} must exceed rho = {}", ps.rho())));
    }
    simple_poles_only(ps)
}

/// `Ψ(x + i0) - Ψ(x - i0) = 2πi Σ D_{n,k} x^{-u}/Γ(1 - u)` for `x > ρ`.
pub fn jump_on_cut(ps: &ParameterSet, x: f64, opts: &EvalOptions) -> Result<Complex64> {
    Ok(cut_values(ps, x, opts)?.jump)
}

/// `(Ψ(x + i0) + Ψ(x - i0))/2 = Σ D_{n,k} Γ(u) cos(πu) x^{-u}` for `x > ρ`.
pub fn average_on_cut(ps: &ParameterSet, x: f64, opts: &EvalOptions) -> Result<Complex64> {
    Ok(cut_values(ps, x, opts)?.average)
}

pub fn cut_values(ps: &ParameterSet, x: f64, opts: &EvalOptions) -> Result<CutValues> {
    opts.validate()?;
    cut_precheck(ps, x)?;
    let lx = x.ln();
    let ratio = ps.rho() / x;
    // jump: 1/Γ(1-u) is entire, zero at u = 1, 2, ...
    let (j, jerr, _) = residue_sum(ps, opts, ratio, |u| {
        let one_minus = Complex64::new(1.0, 0.0) - u;
        if nearest_pole(one_minus).is_some() {
            return None;
        }
        Some(-log_gamma_any(one_minus).ok()? - u * lx)
    })?;
    // average: Γ(u) cos(πu) as exp(ln Γ(u)) times cos, sign folded into the log
    let (a, aerr, _) = residue_sum(ps, opts, ratio, |u| {
        let c = (u * PI).cos();
        if c == Complex64::new(0.0, 0.0) || nearest_pole(u).is_some() {
            return None;
        }
        Some(log_gamma_any(u).ok()? + c.ln() - u * lx)
    })?;
    Ok(CutValues {
        x,
        jump: Complex64::new(0.0, 2.0 * PI * j.re),
        average: Complex64::new(a.re, 0.0),
        err_estimate: (2.0 * PI * jerr).max(aerr),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn collision_detected() {
        let ps = ParameterSet::gauss(0.5, 0.5, 1.3).unwrap();
        assert!(matches!(
            eval_residue_series(&ps, c(-2.0), &EvalOptions::default()),
            Err(FwxError::PoleCollision { .. })
        ));
    }

    #[test]
    fn schwarz_reflection() {
        let ps = ParameterSet::gauss(0.5, 0.7, 1.3).unwrap();
        let z = Complex64::new(-1.5, 2.0);
        let o = EvalOptions::default();
        let a = eval_residue_series(&ps, z, &o).unwrap().value;
        let b = eval_residue_series(&ps, z.conj(), &o).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn gauss_inversion() {
        // 2F1(a,b;c;z) for z = -2 via the Pfaff transform z/(z-1) = 2/3
        let (a, b, cc) = (0.5, 0.7, 1.3);
        let ps = ParameterSet::gauss(a, b, cc).unwrap();
        let got = eval_residue_series(&ps, c(-2.0), &EvalOptions::default().with_tol(1e-13)).unwrap().value;
        let w: f64 = 2.0 / 3.0;
        let (mut term, mut f) = (1.0, 0.0);
        for n in 0..400 {
            f += term;
            let nf = n as f64;
            term *= (a + nf) * (cc - b + nf) / ((cc + nf) * (nf + 1.0)) * w;
        }
        let pref = gamma(c(a)).unwrap() * gamma(c(b)).unwrap() / gamma(c(cc)).unwrap();
        let want = pref * f * 3f64.powf(-a);
        assert!((got - want).norm() < 1e-12 * want.norm(), "{got} {want}");
    }

    #[test]
    fn cut_inputs_validated() {
        let ps = ParameterSet::gauss(0.5, 0.7, 1.3).unwrap();
        let o = EvalOptions::default();
        assert!(matches!(jump_on_cut(&ps, 0.5, &o), Err(FwxError::Domain(_))));
        let cps = ParameterSet::new(
            vec![Complex64::new(0.5, 0.1), c(0.7)],
            vec![1.0, 1.0],
            vec![c(1.3)],
            vec![1.0],
        )
        .unwrap();
        assert!(matches!(jump_on_cut(&cps, 2.0, &o), Err(FwxError::Domain(_))));
    }
}
