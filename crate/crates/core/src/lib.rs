//! Exact and numeric machinery relating the Klein `j` function to the
//! Fricke-invariant functions `G_p` on `X_0(p)` for supersingular primes.
//!
//! * [`qseries`]: truncated Laurent series over exact rationals.
//! * [`modforms`]: eta quotients, `j`, `Φ_p`, `G_p` and the Hecke image `P_p`.
//! * [`modcurve`]: Fricke fixed points on `X_0(p)` and class-number counts.
//! * [`digits`]: base-`p` digit operators and coefficient chain identities.
//! * [`numeric`]: complex evaluation, reduction to the fundamental domain,
//!   inversion of `j`.
//! * [`cli`]: coefficient tables, run reports and the command implementations.

pub mod arith;
pub mod cli;
pub mod digits;
pub mod modcurve;
pub mod modforms;
pub mod numeric;
pub mod qseries;

pub use qseries::{ExactRational, LaurentSeries, SeriesError};
