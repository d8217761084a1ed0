//! Shared reader/writer for two-column numeric text files.
//!
//! Format: one `col0 col1` pair per line, whitespace-separated. Blank lines
//! and lines starting with `#` are skipped. Parse errors carry 1-based line
//! numbers.

use std::fs;
use std::path::Path;

use crate::{Error, Result};

/// A parsed row: (1-based source line, first column, second column).
pub(crate) type Row = (usize, f64, f64);

pub(crate) fn read_two_column(path: &Path) -> Result<Vec<Row>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b)) = (fields.next(), fields.next()) else {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected two columns, found {trimmed:?}"),
            });
        };
        if fields.next().is_some() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: "expected two columns, found more".into(),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("not a number: {s:?}"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("non-finite value: {s:?}"),
                })
            }
        };
        rows.push((line, parse(a)?, parse(b)?));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: text.lines().count().max(1),
            message: "file contains no data rows".into(),
        });
    }
    Ok(rows)
}

/// Checks that the first column is strictly increasing with uniform spacing.
/// Returns the spacing. `rows` must contain at least two entries.
pub(crate) fn uniform_spacing(path: &Path, rows: &[Row]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: rows.first().map_or(1, |r| r.0),
            message: "need at least two data rows".into(),
        });
    }
    let dx = rows[1].1 - rows[0].1;
    if !(dx > 0.0) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: rows[1].0,
            message: "first column must be strictly increasing".into(),
        });
    }
    let tol = 1e-9 * dx.max(1.0);
    for w in rows.windows(2) {
        let step = w[1].1 - w[0].1;
        if (step - dx).abs() > tol {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: w[1].0,
                message: format!("non-uniform spacing: expected {dx}, found {step}"),
            });
        }
    }
    Ok(dx)
}

/// Formats a float with 17 significant digits so that parsing recovers the
/// exact bits.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes rows as two-column text, full precision.
pub(crate) fn write_two_column(path: &Path, rows: impl Iterator<Item = (f64, f64)>) -> Result<()> {
    use std::fmt::Write as _;
    let mut out = String::new();
    for (a, b) in rows {
        let _ = writeln!(out, "{} {}", fmt_f64(a), fmt_f64(b));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
