use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use growthlab::StatePoint;
use serde::Serialize;

/// Seventeen significant digits, enough to round-trip any double.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub const TRAJECTORY_HEADER: &str = "t,c,k,h,u,z,lambda,mu";

pub fn trajectory_csv(points: &[StatePoint], provenance: Option<&str>) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    if provenance.is_some() {
        out.push_str(",provenance");
    }
    out.push('\n');
    for s in points {
        let cols = [s.t, s.c, s.k, s.h, s.u, s.z, s.lambda, s.mu].map(num);
        out.push_str(&cols.join(","));
        if let Some(p) = provenance {
            let _ = write!(out, ",{p}");
        }
        out.push('\n');
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
