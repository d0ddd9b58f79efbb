//! `tropgrass`: weighted trees, their m-dissimilarity vectors, and exact
//! Puiseux-matrix certificates on tropical Grassmannians.
//!
//! Four subcommands cover the pipeline end to end:
//!
//! * `gen-tree` — seeded random tree generation, written as Newick text
//!   with exact rational branch lengths;
//! * `phi` — the m-dissimilarity vector of a tree, as JSON;
//! * `check` — four-point, ultrametric, and three-term Pluecker scans on
//!   a dissimilarity matrix, with a violation witness on failure;
//! * `verify` — the matrix-certificate pipelines: the full valuation
//!   certificate for 4-subsets, symbolic and numeric square-matrix runs,
//!   the prime-coefficient golden example, and the root-containment
//!   counterexample.
//!
//! Every report is JSON on stdout with exact rationals rendered as
//! strings; no floating point is ever emitted. Exit codes are a stable
//! contract: 0 success, 1 mathematical violation, 2 input or usage error,
//! 3 genericity retries exhausted. Internal parallelism honors
//! `RAYON_NUM_THREADS`; results do not depend on the thread count.

// Error variants carry the core library's full violation witnesses; they
// occur once per run at most, so boxing would only obscure the plumbing.
#![allow(clippy::result_large_err)]

mod commands;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use error::CliError;

#[derive(Parser)]
#[command(
    name = "tropgrass",
    version,
    about = "Weighted trees, dissimilarity vectors, and tropical Grassmannian certificates",
    long_about = "Exact-arithmetic pipelines for weighted trees and their m-dissimilarity \
                  vectors: generation, membership checks, and Puiseux-matrix certificates. \
                  All reports are JSON with rationals as strings. Exit codes: 0 success, \
                  1 mathematical violation, 2 input error, 3 genericity retries exhausted. \
                  Set RAYON_NUM_THREADS to bound internal parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random weighted tree and write it as Newick text.
    GenTree(GenTreeArgs),
    /// Compute the m-dissimilarity vector of a tree.
    Phi(PhiArgs),
    /// Check a dissimilarity matrix against a membership condition.
    Check(CheckArgs),
    /// Run a verification pipeline and print its report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenTreeArgs {
    /// Number of leaves (at least 3).
    #[arg(long, value_parser = clap::value_parser!(usize))]
    n: usize,

    /// Seed for the random generator; the same seed always yields the
    /// same tree.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Generate a rooted equidistant tree instead of an unrooted one.
    #[arg(long)]
    equidistant: bool,

    /// Edge lengths are drawn uniformly from the integers 1..=MAX
    /// (ignored with --equidistant, which draws heights itself).
    #[arg(long, value_name = "MAX", default_value_t = 10, conflicts_with = "equidistant")]
    max_length: u32,

    /// Destination file for the Newick text.
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

#[derive(Args)]
struct PhiArgs {
    /// Newick tree file.
    #[arg(long, value_name = "FILE")]
    tree: PathBuf,

    /// Subset size m, with 2 <= m <= number of leaves.
    #[arg(short, long)]
    m: usize,

    /// Also write the vector as JSON (readable back by `check --pluecker`).
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).multiple(false)))]
struct CheckArgs {
    /// Matrix file: CSV of rationals, or an m-vector JSON written by `phi`.
    #[arg(long, value_name = "FILE")]
    matrix: PathBuf,

    /// Check the four-point condition on every quadruple.
    #[arg(long, group = "mode")]
    four_point: bool,

    /// Check the ultrametric (three-point) condition on every triple.
    #[arg(long, group = "mode")]
    ultrametric: bool,

    /// Scan the three-term Pluecker conditions on the m-dissimilarity
    /// vector (computed from pairwise input when m > 2).
    #[arg(long, group = "mode", value_name = "M")]
    pluecker: Option<usize>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("pipeline").required(true).multiple(false)))]
struct VerifyArgs {
    /// Full valuation certificate for all 4-subsets of the given tree.
    #[arg(long, group = "pipeline", value_name = "FILE")]
    thm5: Option<PathBuf>,

    /// Square-matrix degree runs over every m-leaf shape.
    #[arg(long, group = "pipeline", value_name = "M")]
    conj3: Option<usize>,

    /// Golden example: the five-leaf tree with prime coefficients must
    /// give determinant degree 37 and leading coefficient 3344.
    #[arg(long, group = "pipeline")]
    example_m5: bool,

    /// Root-containment counterexample: on the five-leaf example and
    /// subset {1,2,3} the plain matrix overshoots the Steiner weight.
    #[arg(long, group = "pipeline")]
    remark_n: bool,

    /// Symbolic identity checks for the three leading-coefficient
    /// formulas, reporting which reading of each formula matched.
    #[arg(long, group = "pipeline")]
    formulas: bool,

    /// With --conj3: keep the coefficients symbolic and expand the
    /// determinant exactly under two independent height assignments.
    #[arg(long, requires = "conj3")]
    symbolic: bool,

    /// Seed for coefficient draws (numeric runs) and retry derivation.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// With --thm5: genericity retry budget before giving up.
    #[arg(long, default_value_t = 4)]
    retries: u32,

    /// With numeric --conj3: seeded coefficient draws per shape.
    #[arg(long, default_value_t = 5)]
    draws: u32,
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::GenTree(args) => commands::gen_tree(&args),
        Command::Phi(args) => commands::phi(&args),
        Command::Check(args) => commands::check(&args),
        Command::Verify(args) => commands::verify(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
