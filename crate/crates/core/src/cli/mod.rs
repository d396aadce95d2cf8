//! Command implementations behind the `fricke` binary, coefficient-table
//! I/O and the line-oriented run report.

mod commands;
mod report;
pub mod table;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::{
    cmd_curve, cmd_digits, cmd_expand, cmd_uhat, cmd_verify, load_alpha_table, table_text, ExpandObject,
    ExpandOutput,
};
pub use report::{CheckOutcome, RunReport};
pub use table::{emit_series_rows, emit_table, parse_table, CoefficientTable, TableError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Table { path: PathBuf, source: TableError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("computation failed: {0}")]
    Compute(String),
}

impl CliError {
    /// 2 for usage, parse and I/O errors, 1 for failed computations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => 1,
            _ => 2,
        }
    }
}

macro_rules! compute_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Compute(e.to_string())
            }
        }
    )*};
}

compute_from!(
    crate::modforms::ModformsError,
    crate::modcurve::ModcurveError,
    crate::digits::DigitsError,
    crate::numeric::NumericError,
    crate::qseries::SeriesError
);
