//! Plain-text matrix format shared by the CLI and the file interfaces.
//!
//! ```text
//! rows cols
//! a11 a12 ...
//! ...
//! ```
//!
//! Symmetric operators are written as a header `n m` followed by `m` matrices in the format
//! above. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::{DenseMatrix, SymMatrix};
use crate::error::{Error, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self { inner: text.lines().enumerate() }
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.inner.by_ref() {
            let t = line.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Some((i + 1, t));
            }
        }
        None
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(lines: &mut Lines<'_>, what: &str) -> Result<(usize, usize, usize)> {
    let (line, text) = lines.next_content().ok_or_else(|| parse_err(0, format!("missing {what} header")))?;
    let dims: Vec<usize> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad dimension `{t}`"))))
        .collect::<Result<_>>()?;
    match dims.as_slice() {
        [a, b] => Ok((*a, *b, line)),
        _ => Err(parse_err(line, format!("{what} header needs two integers"))),
    }
}

fn parse_body(lines: &mut Lines<'_>, rows: usize, cols: usize) -> Result<DenseMatrix> {
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (line, text) = lines
            .next_content()
            .ok_or_else(|| parse_err(0, format!("expected {rows} rows, found {r}")))?;
        let before = data.len();
        for tok in text.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| parse_err(line, format!("bad number `{tok}`")))?;
            if !v.is_finite() {
                return Err(parse_err(line, "entries must be finite"));
            }
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(parse_err(line, format!("expected {cols} entries, found {}", data.len() - before)));
        }
    }
    DenseMatrix::from_vec(rows, cols, data)
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = Lines::new(text);
    let (rows, cols, _) = parse_header(&mut lines, "matrix")?;
    let m = parse_body(&mut lines, rows, cols)?;
    if let Some((line, _)) = lines.next_content() {
        return Err(parse_err(line, "trailing content after matrix"));
    }
    Ok(m)
}

pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format_number(*v)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Shortest decimal form that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    let mut s = String::new();
    write!(s, "{v:?}").expect("write to string");
    s
}

/// Parses `n m` followed by `m` symmetric `n × n` matrices. Each matrix must be exactly symmetric.
pub fn parse_operator(text: &str) -> Result<Vec<SymMatrix>> {
    let mut lines = Lines::new(text);
    let (n, m, header_line) = parse_header(&mut lines, "operator")?;
    let mut mats = Vec::with_capacity(m);
    for _ in 0..m {
        let (rows, cols, line) = parse_header(&mut lines, "matrix")?;
        if rows != n || cols != n {
            return Err(parse_err(line, format!("expected a {n}x{n} matrix, found {rows}x{cols}")));
        }
        let d = parse_body(&mut lines, n, n)?;
        let s = SymMatrix::from_full(n, d.into_vec()).map_err(|e| parse_err(line, e.to_string()))?;
        mats.push(s);
    }
    if let Some((line, _)) = lines.next_content() {
        return Err(parse_err(line, format!("trailing content after {m} matrices (header at line {header_line})")));
    }
    Ok(mats)
}

pub fn format_operator(n: usize, mats: &[SymMatrix]) -> String {
    let mut out = format!("{n} {}\n", mats.len());
    for s in mats {
        out.push_str(&format_matrix(&s.to_dense()));
    }
    out
}
