//! Records and their JSON/CSV renderings.

use std::io::{self, Write};

use fwx_core::{Complex64, FwxError};
use serde::Serialize;

use crate::args::Format;

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct C {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C {
    fn from(z: Complex64) -> Self {
        C { re: z.re, im: z.im }
    }
}

/// 17 significant digits, locale-free.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Quotes a CSV field when it needs it.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn exit_code(e: &FwxError) -> i32 {
    match e {
        FwxError::Parse(_) => 4,
        FwxError::Tolerance { .. } => 3,
        _ => 2,
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

/// One-line error record in the requested format.
pub fn write_error(out: &mut dyn Write, format: Format, e: &FwxError) -> io::Result<()> {
    match format {
        Format::Json => {
            let rec = ErrorRecord {
                error: e.code(),
                message: e.to_string(),
            };
            writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable"))
        }
        Format::Csv => writeln!(out, "error,{},{}", e.code(), field(&e.to_string())),
    }
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(v).expect("serializable"))
}
