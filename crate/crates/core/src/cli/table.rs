//! Plain-text coefficient tables.
//!
//! ```text
//! # comment
//! 11 4
//! 0 22/5
//! 1 17
//! ...
//! ```
//!
//! The first non-comment line is `p N`, followed by one `n value` row for
//! every `n` from 0 to `N` in order. A leading `-1 1` row for the pole is
//! accepted and skipped. Values are integers or `a/b`.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::qseries::{ExactRational, LaurentSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TableError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> TableError {
    TableError { line, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    pub p: u32,
    /// Entry `n` at position `n`, `0 ≤ n ≤ N`.
    pub entries: Vec<ExactRational>,
}

impl CoefficientTable {
    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }
}

pub fn parse_rational(s: &str) -> Option<ExactRational> {
    let r = ExactRational::from_str(s).ok()?;
    Some(r)
}

pub fn parse_table(text: &str) -> Result<CoefficientTable, TableError> {
    let mut header: Option<(u32, usize)> = None;
    let mut entries = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (first, second) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(err(line_no, "expected two fields")),
        };
        let Some((_, declared)) = header else {
            let p = first.parse().map_err(|_| err(line_no, format!("bad prime '{first}'")))?;
            let n = second.parse().map_err(|_| err(line_no, format!("bad order '{second}'")))?;
            header = Some((p, n));
            continue;
        };
        let n: i64 = first.parse().map_err(|_| err(line_no, format!("bad index '{first}'")))?;
        let value = parse_rational(second).ok_or_else(|| err(line_no, format!("bad value '{second}'")))?;
        if n == -1 && entries.is_empty() {
            if value != ExactRational::from_integer(1.into()) {
                return Err(err(line_no, "pole coefficient must be 1"));
            }
            continue;
        }
        if n != entries.len() as i64 {
            return Err(err(line_no, format!("expected index {}, found {n}", entries.len())));
        }
        if entries.len() > declared {
            return Err(err(line_no, format!("row beyond declared order {declared}")));
        }
        entries.push(value);
    }
    let (p, declared) = header.ok_or_else(|| err(last_line, "missing 'p N' header"))?;
    if entries.len() != declared + 1 {
        return Err(err(last_line, format!("declared order {declared} but table ends at {}", entries.len() as i64 - 1)));
    }
    Ok(CoefficientTable { p, entries })
}

/// Header and rows `0..=N`, the inverse of [`parse_table`].
pub fn emit_table(table: &CoefficientTable) -> String {
    let mut out = format!("{} {}\n", table.p, table.order());
    for (n, v) in table.entries.iter().enumerate() {
        writeln!(out, "{n} {v}").expect("write to string");
    }
    out
}

/// One `n value` row per coefficient from the lead to the order.
pub fn emit_series_rows(s: &LaurentSeries) -> String {
    let mut out = String::new();
    for (i, c) in s.coeffs().iter().enumerate() {
        writeln!(out, "{} {}", s.lead() + i as i64, c).expect("write to string");
    }
    out
}
