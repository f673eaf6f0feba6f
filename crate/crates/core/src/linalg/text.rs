//! Plain-text matrix format.
//!
//! The first line holds `rows cols`; each following line holds one row of
//! `re+imj` tokens separated by spaces. Values are written with the shortest
//! representation that parses back to the same `f64`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{}{:?}j", z.re, sign, z.im.abs())
}

pub fn parse_complex(token: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("malformed complex token {token:?}"));
    let body = token.strip_suffix('j').ok_or_else(bad)?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im_abs: f64 = body[split + 1..].parse().map_err(|_| bad())?;
    let im = if bytes[split] == b'-' { -im_abs } else { im_abs };
    Ok(Complex64::new(re, im))
}

pub fn write_matrix(a: &CMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if c > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", format_complex(a[(r, c)]));
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix(text: &str) -> Result<CMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad dimension {t:?}"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse(format!("header must be `rows cols`, got {header:?}")));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for (r, line) in lines.enumerate() {
        let row: Vec<Complex64> = line.split_whitespace().map(parse_complex).collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "row {r} has {} entries, expected {cols}",
                row.len()
            )));
        }
        data.extend(row);
    }
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {rows} rows, found {}",
            data.len() / cols.max(1)
        )));
    }
    CMatrix::new(rows, cols, data)
}

/// Reads a vector stored as an `n × 1` (or `1 × n`) matrix.
pub fn read_vector(text: &str) -> Result<CVector> {
    let m = read_matrix(text)?;
    match m.shape() {
        (_, 1) | (1, _) => CVector::new(m.as_slice().to_vec()),
        shape => Err(Error::Parse(format!("expected a vector, got shape {shape:?}"))),
    }
}

pub fn write_vector(v: &CVector) -> String {
    write_matrix(&v.to_column_matrix())
}
