//! Channel file format.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "kraus": [
//!     {"re": [[1.0000000000000000e0, 0.0000000000000000e0], [0.0000000000000000e0, 0.0000000000000000e0]], "im": [[0.0000000000000000e0, 0.0000000000000000e0], [0.0000000000000000e0, 0.0000000000000000e0]]}
//!   ]
//! }
//! ```
//!
//! Matrices are row-major. Writers emit every number with 17 significant
//! digits, so reading and re-writing a canonical file is byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use dfakit::{ComplexMatrix64, KrausChannel64, C64};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed channel file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid channel file: {0}")]
    Invalid(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    dim: usize,
    kraus: Vec<RawMatrix>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawMatrix {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn check_rows(rows: &[Vec<f64>], dim: usize, what: &str, index: usize) -> Result<(), FormatError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(FormatError::Invalid(format!("kraus[{index}].{what} is not {dim}x{dim}")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(FormatError::Invalid(format!("kraus[{index}].{what} has a non-finite entry")));
    }
    Ok(())
}

pub fn parse_channel(text: &str) -> Result<KrausChannel64, FormatError> {
    let raw: RawChannel = serde_json::from_str(text)?;
    if raw.dim == 0 {
        return Err(FormatError::Invalid("dim must be positive".into()));
    }
    if raw.kraus.is_empty() {
        return Err(FormatError::Invalid("kraus list is empty".into()));
    }
    let mut kraus = Vec::with_capacity(raw.kraus.len());
    for (i, m) in raw.kraus.iter().enumerate() {
        check_rows(&m.re, raw.dim, "re", i)?;
        check_rows(&m.im, raw.dim, "im", i)?;
        kraus.push(ComplexMatrix64::from_fn(raw.dim, raw.dim, |r, c| C64::new(m.re[r][c], m.im[r][c])));
    }
    KrausChannel64::new(kraus).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn read_channel(path: &Path) -> Result<KrausChannel64, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_channel(&text)
}

/// Fixed 17-significant-digit rendering.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn render_rows(out: &mut String, m: &ComplexMatrix64, part: fn(&C64) -> f64) {
    out.push('[');
    for r in 0..m.nrows() {
        if r > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for c in 0..m.ncols() {
            if c > 0 {
                out.push_str(", ");
            }
            out.push_str(&format_float(part(&m[(r, c)])));
        }
        out.push(']');
    }
    out.push(']');
}

/// `{"re": [...], "im": [...]}` for one matrix, on a single line.
pub fn render_matrix(m: &ComplexMatrix64) -> String {
    let mut out = String::from("{\"re\": ");
    render_rows(&mut out, m, |z| z.re);
    out.push_str(", \"im\": ");
    render_rows(&mut out, m, |z| z.im);
    out.push('}');
    out
}

pub fn render_channel(ch: &KrausChannel64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"dim\": {},", ch.dim());
    let _ = writeln!(out, "  \"kraus\": [");
    for (i, a) in ch.kraus().iter().enumerate() {
        let sep = if i + 1 < ch.num_kraus() { "," } else { "" };
        let _ = writeln!(out, "    {}{sep}", render_matrix(a));
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "}}");
    out
}

pub fn write_channel(path: &Path, ch: &KrausChannel64) -> Result<(), FormatError> {
    std::fs::write(path, render_channel(ch)).map_err(|source| FormatError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Parses one `{"re", "im"}` matrix value, as emitted in reports.
pub fn matrix_from_value(v: &serde_json::Value, dim: usize) -> Result<ComplexMatrix64, FormatError> {
    let m: RawMatrix = serde_json::from_value(v.clone())?;
    check_rows(&m.re, dim, "re", 0)?;
    check_rows(&m.im, dim, "im", 0)?;
    Ok(ComplexMatrix64::from_fn(dim, dim, |r, c| C64::new(m.re[r][c], m.im[r][c])))
}
