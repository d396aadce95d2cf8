//! `fricke`: expansions, identity checks, fixed-point censuses and `û_p`.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on usage,
//! parse or I/O errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fricke_core::cli::{
    cmd_curve, cmd_digits, cmd_expand, cmd_uhat, cmd_verify, CliError, ExpandObject, RunReport,
};
use fricke_core::numeric::Precision;

#[derive(Parser)]
#[command(name = "fricke", version, about = "Fricke-invariant functions, j and X_0(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of phi, phi-fricke, g, j or p-series.
    Expand {
        object: ExpandObject,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        alpha_file: Option<PathBuf>,
        /// Write the rows here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact identity suite for a supersingular prime.
    Verify {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        alpha_file: Option<PathBuf>,
    },
    /// Fricke fixed points on X_0(p) and class-number counts.
    Curve {
        #[arg(long)]
        p: u32,
    },
    /// Locate the reduced point where j equals -P_p(rho).
    Uhat {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1e-8)]
        precision: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long)]
        alpha_file: Option<PathBuf>,
    },
    /// Base-p digit operators at n.
    Digits {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        l: u64,
    },
}

fn run(cli: Cli) -> Result<RunReport, CliError> {
    match cli.command {
        Command::Expand { object, p, order, alpha_file, out } => {
            let output = cmd_expand(object, p, order, alpha_file.as_deref())?;
            match out {
                Some(path) => std::fs::write(&path, &output.rows).map_err(|source| CliError::Io { path, source })?,
                None => print!("{}", output.rows),
            }
            // rows own stdout; the report goes to stderr
            eprint!("{}", output.report);
            Ok(RunReport::new("expand"))
        }
        Command::Verify { p, order, alpha_file } => cmd_verify(p, order, alpha_file.as_deref()),
        Command::Curve { p } => cmd_curve(p),
        Command::Uhat { p, precision, max_iter, alpha_file } => {
            if !(precision > 0.0) {
                return Err(CliError::Usage("--precision must be positive".into()));
            }
            cmd_uhat(p, Precision { tolerance: precision, max_iter }, alpha_file.as_deref())
        }
        Command::Digits { p, n, k, l } => cmd_digits(p, n, k, l),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let is_expand = matches!(cli.command, Command::Expand { .. });
    match run(cli) {
        Ok(report) => {
            if !is_expand {
                print!("{report}");
            }
            let _ = std::io::stdout().flush();
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
