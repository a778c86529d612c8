//! `spectral-twist`: check finite real spectral triples, twist them by their
//! grading and compute real parts.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad
//! input.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "spectral-twist", version, about = "Finite real spectral triples and their twists")]
pub struct Cli {
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Scalar arithmetic; defaults to the document's mode, or exact.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Tolerance for float mode.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms, order zero and the (twisted) first-order condition.
    Validate { path: String },
    /// Write the twist by grading of a graded real triple.
    TwistByGrading {
        path: String,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        out: Option<String>,
        /// JSON matrix to use as the unitary exchanging the eigenspaces.
        #[arg(long)]
        identification: Option<String>,
    },
    /// Real part, its structure, and the intersection with the opposite algebra.
    RealPart { path: String },
    /// Build and verify the one-generation standard model.
    Sm(commands::SmArgs),
    /// Randomized campaign over generated triples.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// KO class 0, 2, 4 or 6; all four when absent.
        #[arg(long)]
        ko: Option<u8>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            eprintln!("error: --tol must be a non-negative number");
            return ExitCode::from(2);
        }
        spectral_twist::set_tolerance(tol);
    }
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::json!({ "error": e }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
