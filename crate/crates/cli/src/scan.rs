//! `fwx scan`: evaluation over a line or ring given in units of `ρ`.

use std::f64::consts::PI;
use std::io::Write;

use fwx_core::engine::w_radius_probe;
use fwx_core::params::parse_complex;
use fwx_core::*;
use serde::Serialize;

use crate::args::{Format, ScanArgs};
use crate::output::{field, num, write_json, C};
use crate::{build_params, fail, options, representation};

/// A grid argument; its points are in units of `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Line { from: Complex64, to: Complex64, n: usize },
    Ring { center: Complex64, radius: f64, n: usize },
}

impl Grid {
    pub fn parse(s: &str) -> Result<Grid> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || FwxError::Parse(format!("grid `{s}`: expected line:z0:z1:n or ring:center:radius:n"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let n: usize = parts[3].parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(FwxError::Parse(format!("grid `{s}` has no points")));
        }
        match parts[0] {
            "line" => Ok(Grid::Line {
                from: parse_complex(parts[1])?,
                to: parse_complex(parts[2])?,
                n,
            }),
            "ring" => {
                let radius: f64 = parts[2].parse().map_err(|_| bad())?;
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(FwxError::Parse(format!("ring radius `{}` must be positive", parts[2])));
                }
                Ok(Grid::Ring {
                    center: parse_complex(parts[1])?,
                    radius,
                    n,
                })
            }
            _ => Err(bad()),
        }
    }

    /// Line points include both ends; ring points sit at angles
    /// `(k + 1/2) 2π/n`, which keeps a ring centred on the real axis off it.
    pub fn points(&self) -> Vec<Complex64> {
        match *self {
            Grid::Line { from, n: 1, .. } => vec![from],
            Grid::Line { from, to, n } => (0..n).map(|k| from + (to - from) * (k as f64 / (n - 1) as f64)).collect(),
            Grid::Ring { center, radius, n } => (0..n)
                .map(|k| center + Complex64::from_polar(radius, (k as f64 + 0.5) * 2.0 * PI / n as f64))
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct PointRecord {
    index: usize,
    zeta: C,
    z: C,
    value: Option<C>,
    representation: Option<&'static str>,
    terms_used: Option<usize>,
    err_estimate: Option<f64>,
    error: Option<&'static str>,
    message: Option<String>,
}

#[derive(Serialize)]
struct RadiusRecord {
    radius_estimate: f64,
    root: f64,
    last_reliable: usize,
}

pub fn run(a: &ScanArgs, out: &mut dyn Write) -> std::io::Result<i32> {
    let format = a.num.format.unwrap_or(Format::Csv);
    let setup = build_params(&a.params).and_then(|ps| Ok((ps, Grid::parse(&a.grid)?)));
    let (ps, grid) = match setup {
        Ok(v) => v,
        Err(e) => return fail(out, format, &e),
    };
    let opts = options(&a.num);
    let rep = representation(a.rep);
    if format == Format::Csv {
        writeln!(
            out,
            "index,zeta_re,zeta_im,z_re,z_im,value_re,value_im,representation,terms_used,err_estimate,error"
        )?;
    }
    for (index, zeta) in grid.points().into_iter().enumerate() {
        let z = zeta * ps.rho();
        let res = eval_with(&ps, z, rep, &opts);
        match format {
            Format::Json => {
                let rec = match &res {
                    Ok(r) => PointRecord {
                        index,
                        zeta: zeta.into(),
                        z: z.into(),
                        value: Some(r.value.into()),
                        representation: Some(r.representation.as_str()),
                        terms_used: Some(r.terms_used),
                        err_estimate: Some(r.err_estimate),
                        error: None,
                        message: None,
                    },
                    Err(e) => PointRecord {
                        index,
                        zeta: zeta.into(),
                        z: z.into(),
                        value: None,
                        representation: None,
                        terms_used: None,
                        err_estimate: None,
                        error: Some(e.code()),
                        message: Some(e.to_string()),
                    },
                };
                write_json(out, &rec)?;
            }
            Format::Csv => {
                let head = format!("{index},{},{},{},{}", num(zeta.re), num(zeta.im), num(z.re), num(z.im));
                match &res {
                    Ok(r) => writeln!(
                        out,
                        "{head},{},{},{},{},{},",
                        num(r.value.re),
                        num(r.value.im),
                        r.representation,
                        r.terms_used,
                        num(r.err_estimate)
                    )?,
                    Err(e) => writeln!(out, "{head},,,,,,{}", field(e.code()))?,
                }
            }
        }
    }
    if a.radius {
        match w_radius_probe(&ps, ps.expansion_sigma(), 60, 0.1) {
            Ok(p) => match format {
                Format::Json => write_json(
                    out,
                    &RadiusRecord {
                        radius_estimate: p.estimate,
                        root: p.root,
                        last_reliable: p.last_reliable,
                    },
                )?,
                Format::Csv => {
                    writeln!(out)?;
                    writeln!(out, "radius_estimate,root,last_reliable")?;
                    writeln!(out, "{},{},{}", num(p.estimate), num(p.root), p.last_reliable)?;
                }
            },
            Err(e) => return fail(out, format, &e),
        }
    }
    Ok(0)
}
