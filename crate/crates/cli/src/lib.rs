//! Command-line front end for `fwx-core`.
//!
//! [`run`] parses arguments, writes records to the given sink and returns the
//! process exit code: 0 ok, 1 self-test failure, 2 domain error, 3 tolerance
//! failure, 4 parse error.

pub mod args;
pub mod output;
pub mod scan;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use fwx_core::engine::{
    coeff_r_theta, coeff_w_theta, l_r, l_r_theta, q_m, q_m_theta, v_n, v_n_norlund,
};
use fwx_core::params::{parse_complex, parse_complex_list, parse_real_list};
use fwx_core::*;
use serde::Serialize;

use args::{Cli, Command, CoeffsArgs, CutArgs, EvalArgs, Format, Numerics, ParamArgs, Rep, Seq};
use output::{exit_code, num, write_error, write_json, C};

pub fn build_params(p: &ParamArgs) -> Result<ParameterSet> {
    ParameterSet::new(
        parse_complex_list(&p.a)?,
        parse_real_list(&p.big_a)?,
        parse_complex_list(&p.b)?,
        parse_real_list(&p.big_b)?,
    )
}

pub fn options(n: &Numerics) -> EvalOptions {
    let mut o = EvalOptions::default().with_tol(n.tol).with_theta(n.theta);
    if let Some(m) = n.max_terms {
        o = o.with_max_terms(m);
    }
    o.sigma = n.sigma;
    o
}

pub fn representation(rep: Rep) -> Option<Representation> {
    match rep {
        Rep::Auto => None,
        Rep::Maclaurin => Some(Representation::Maclaurin),
        Rep::Residue => Some(Representation::Residue),
        Rep::Singular => Some(Representation::Singular),
        Rep::AtRho => Some(Representation::AtRho),
    }
}

/// Runs the tool on `args` (program name first), writing to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => eval(&a, out),
        Command::Coeffs(a) => coeffs(&a, out),
        Command::Cut(a) => cut(&a, out),
        Command::Scan(a) => scan::run(&a, out),
        Command::Selftest(a) => selftest::run(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            // an unwritable sink leaves nothing sensible to report
            eprintln!("fwx: {e}");
            2
        }
    }
}

/// Reports `e` and returns its exit code.
fn fail(out: &mut dyn Write, format: Format, e: &FwxError) -> std::io::Result<i32> {
    write_error(out, format, e)?;
    Ok(exit_code(e))
}

#[derive(Serialize)]
struct EvalRecord {
    z: Option<C>,
    value: C,
    representation: &'static str,
    terms_used: usize,
    err_estimate: f64,
    warnings: Vec<String>,
}

fn eval(a: &EvalArgs, out: &mut dyn Write) -> std::io::Result<i32> {
    let format = a.num.format.unwrap_or(Format::Json);
    let res = (|| {
        let ps = build_params(&a.params)?;
        let opts = options(&a.num);
        if a.at_rho || a.rep == Rep::AtRho {
            return Ok((None, eval_at_rho(&ps, &opts)?));
        }
        let z = parse_complex(a.z.as_deref().unwrap_or_default())?;
        Ok((Some(z), eval_with(&ps, z, representation(a.rep), &opts)?))
    })();
    let (z, r) = match res {
        Ok(v) => v,
        Err(e) => return fail(out, format, &e),
    };
    match format {
        Format::Json => write_json(
            out,
            &EvalRecord {
                z: z.map(C::from),
                value: r.value.into(),
                representation: r.representation.as_str(),
                terms_used: r.terms_used,
                err_estimate: r.err_estimate,
                warnings: r.warnings,
            },
        )?,
        Format::Csv => {
            writeln!(out, "z_re,z_im,value_re,value_im,representation,terms_used,err_estimate")?;
            let (zr, zi) = z.map_or((String::new(), String::new()), |z| (num(z.re), num(z.im)));
            writeln!(
                out,
                "{zr},{zi},{},{},{},{},{}",
                num(r.value.re),
                num(r.value.im),
                r.representation,
                r.terms_used,
                num(r.err_estimate)
            )?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct CoeffRow {
    index: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CoeffRecord {
    sequence: &'static str,
    sigma: f64,
    theta: f64,
    rows: Vec<CoeffRow>,
}

fn seq_name(s: Seq) -> &'static str {
    match s {
        Seq::Q => "q",
        Seq::L => "l",
        Seq::QTheta => "q-theta",
        Seq::LTheta => "l-theta",
        Seq::V => "v",
        Seq::VNorlund => "v-norlund",
        Seq::R => "r",
        Seq::W => "w",
    }
}

fn coeffs(a: &CoeffsArgs, out: &mut dyn Write) -> std::io::Result<i32> {
    let format = a.num.format.unwrap_or(Format::Csv);
    let ps = match build_params(&a.params) {
        Ok(ps) => ps,
        Err(e) => return fail(out, format, &e),
    };
    let theta = a.num.theta;
    // R_m and W_m do not depend on σ, the rest do
    let sigma = match (a.seq, a.num.sigma) {
        (Seq::R | Seq::W, None) => Ok(ps.expansion_sigma()),
        (_, s) => ps.choose_sigma(s),
    };
    let sigma = match sigma {
        Ok(s) => s,
        Err(e) => return fail(out, format, &e),
    };
    let first = if matches!(a.seq, Seq::Q | Seq::QTheta) { 1 } else { 0 };
    let mut rows = Vec::with_capacity(a.count);
    let mut failure = None;
    for index in first..first + a.count {
        let v = match a.seq {
            Seq::Q => q_m(&ps, sigma, index),
            Seq::QTheta => q_m_theta(&ps, sigma, theta, index),
            Seq::L => l_r(&ps, sigma, index),
            Seq::LTheta => l_r_theta(&ps, sigma, theta, index),
            Seq::V => v_n(&ps, sigma, theta, index),
            Seq::VNorlund => v_n_norlund(&ps, sigma, theta, index),
            Seq::R => coeff_r_theta(&ps, sigma, theta, index).map(|e| e.value),
            Seq::W => coeff_w_theta(&ps, sigma, theta, index, a.num.tol).map(|e| e.value),
        };
        match v {
            Ok(v) => rows.push(CoeffRow { index, re: v.re, im: v.im }),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    match format {
        Format::Csv => {
            writeln!(out, "index,re,im")?;
            for r in &rows {
                writeln!(out, "{},{},{}", r.index, num(r.re), num(r.im))?;
            }
        }
        Format::Json if failure.is_none() => write_json(
            out,
            &CoeffRecord {
                sequence: seq_name(a.seq),
                sigma,
                theta,
                rows,
            },
        )?,
        Format::Json => {}
    }
    match failure {
        Some(e) => fail(out, format, &e),
        None => Ok(0),
    }
}

#[derive(Serialize)]
struct CutRecord {
    x: f64,
    jump: C,
    average: C,
    err_estimate: f64,
}

fn cut(a: &CutArgs, out: &mut dyn Write) -> std::io::Result<i32> {
    let format = a.num.format.unwrap_or(Format::Json);
    let res = build_params(&a.params).and_then(|ps| cut_values(&ps, a.x, &options(&a.num)));
    let cv = match res {
        Ok(cv) => cv,
        Err(e) => return fail(out, format, &e),
    };
    match format {
        Format::Json => write_json(
            out,
            &CutRecord {
                x: cv.x,
                jump: cv.jump.into(),
                average: cv.average.into(),
                err_estimate: cv.err_estimate,
            },
        )?,
        Format::Csv => {
            writeln!(out, "x,jump_re,jump_im,average_re,average_im,err_estimate")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                num(cv.x),
                num(cv.jump.re),
                num(cv.jump.im),
                num(cv.average.re),
                num(cv.average.im),
                num(cv.err_estimate)
            )?;
        }
    }
    Ok(0)
}
