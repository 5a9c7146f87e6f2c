//! MacKay's alist format for sparse binary matrices.
//!
//! ```text
//! N M                 columns, rows
//! max_col_w max_row_w
//! col weights (N)
//! row weights (M)
//! N lines: 1-based row indices of each column (zero padding allowed)
//! M lines: 1-based column indices of each row (zero padding allowed)
//! ```
//!
//! The column and row sections must describe the same matrix.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, ParityMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlistError {
    #[error("unexpected end of input while reading {0}")]
    Truncated(&'static str),
    #[error("invalid integer `{0}`")]
    InvalidInteger(String),
    #[error("{what} {index} lists {got} entries but its weight is {weight}")]
    WeightMismatch { what: &'static str, index: usize, weight: usize, got: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("column lists and row lists describe different matrices")]
    Inconsistent,
    #[error("trailing data after the row section")]
    TrailingData,
    #[error(transparent)]
    Matrix(#[from] GraphError),
}

struct Tokens<'a> {
    inner: std::str::SplitWhitespace<'a>,
}

impl Tokens<'_> {
    fn next(&mut self, what: &'static str) -> Result<usize, AlistError> {
        let tok = self.inner.next().ok_or(AlistError::Truncated(what))?;
        tok.parse().map_err(|_| AlistError::InvalidInteger(tok.to_string()))
    }
}

pub fn parse_alist(text: &str) -> Result<ParityMatrix, AlistError> {
    let mut header = Tokens { inner: text.split_whitespace() };
    let n = header.next("dimensions")?;
    let m = header.next("dimensions")?;
    header.next("maximum weights")?;
    header.next("maximum weights")?;
    let col_weights = (0..n).map(|_| header.next("column weights")).collect::<Result<Vec<_>, _>>()?;
    let row_weights = (0..m).map(|_| header.next("row weights")).collect::<Result<Vec<_>, _>>()?;

    // The four header lines are followed by one index list per line. Lists
    // may be zero-padded to the maximum weight.
    let mut body_lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).skip(4);
    let mut read_lists = |count: usize, weights: &[usize], bound: usize, what: &'static str| {
        (0..count)
            .map(|idx| {
                let line = body_lines.next().ok_or(AlistError::Truncated(what))?;
                let entries = line
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| AlistError::InvalidInteger(t.to_string())))
                    .filter(|r| !matches!(r, Ok(0)))
                    .map(|r| {
                        r.and_then(|v| {
                            if v > bound {
                                Err(AlistError::IndexOutOfRange { index: v, max: bound })
                            } else {
                                Ok(v - 1)
                            }
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if entries.len() != weights[idx] {
                    return Err(AlistError::WeightMismatch {
                        what,
                        index: idx + 1,
                        weight: weights[idx],
                        got: entries.len(),
                    });
                }
                Ok(entries)
            })
            .collect::<Result<Vec<_>, AlistError>>()
    };
    let mut columns = read_lists(n, &col_weights, m, "column")?;
    let rows = read_lists(m, &row_weights, n, "row")?;
    if body_lines.next().is_some() {
        return Err(AlistError::TrailingData);
    }

    let matrix = ParityMatrix::from_rows(n, rows)?;
    for c in &mut columns {
        c.sort_unstable();
    }
    if matrix.columns() != columns {
        return Err(AlistError::Inconsistent);
    }
    Ok(matrix)
}

/// Writes `matrix` in alist form without zero padding.
pub fn write_alist(matrix: &ParityMatrix) -> String {
    let columns = matrix.columns();
    let rows = matrix.rows();
    let mut out = String::new();
    let max_col = columns.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    writeln!(out, "{} {}", matrix.num_cols(), matrix.num_rows()).unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(out, "{}", join(&mut columns.iter().map(Vec::len))).unwrap();
    writeln!(out, "{}", join(&mut rows.iter().map(Vec::len))).unwrap();
    for list in columns.iter().chain(rows.iter()) {
        writeln!(out, "{}", join(&mut list.iter().map(|x| x + 1))).unwrap();
    }
    out
}
