use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod gen;
mod lemma;
mod spectrum;
mod verify;

/// Verifies the odd-power trace formula for pairs of projections.
#[derive(Parser)]
#[command(name = "projpair", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a pair file (or every *.json file in a directory)
    Verify {
        #[arg(long)]
        input: PathBuf,

        /// Comma-separated odd powers
        #[arg(long, default_value = "1,3,5")]
        n: String,

        /// Machine-readable report on stdout; human text goes to stderr
        #[arg(long)]
        json: bool,

        /// Absolute comparison tolerance for float pairs
        #[arg(long)]
        tol: Option<f64>,
    },

    /// Generate a pair file
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,

        /// Required for orthogonal and oblique; checked against the blocks for prescribed
        #[arg(long)]
        dim: Option<usize>,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Defaults to dim/2
        #[arg(long)]
        rank_p: Option<usize>,

        /// Defaults to dim/2
        #[arg(long)]
        rank_q: Option<usize>,

        /// Bound on the integer factors of oblique projections
        #[arg(long, default_value_t = 3)]
        entry_bound: i64,

        #[arg(long, default_value_t = 0)]
        d10: usize,

        #[arg(long, default_value_t = 0)]
        d01: usize,

        #[arg(long, default_value_t = 0)]
        d11: usize,

        #[arg(long, default_value_t = 0)]
        d00: usize,

        /// 2x2 blocks, e.g. "pyth:2:1,shear:3/2"
        #[arg(long, default_value = "")]
        blocks: String,

        /// Conjugate the prescribed pair by a seeded unimodular matrix
        #[arg(long)]
        conjugate: bool,

        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Run the symbolic identity suite and its numeric cross-check
    Lemma {
        #[arg(long, default_value_t = 9)]
        max_n: u32,

        #[arg(long, default_value_t = 100)]
        numeric_samples: usize,

        /// Seed for the numeric sample pairs
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Extra identities, one "lhs == rhs" per line
        #[arg(long)]
        corpus: Option<PathBuf>,
    },

    /// Check that the spectrum of P - Q is symmetric under negation (CSV on stdout)
    Spectrum {
        #[arg(long)]
        input: PathBuf,

        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Orthogonal,
    Oblique,
    Prescribed,
}

/// Exit codes: 0 success, 1 a check failed, 2 bad input.
pub(crate) const EXIT_FAIL: u8 = 1;
pub(crate) const EXIT_INPUT: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            input,
            n,
            json,
            tol,
        } => verify::run(&input, &n, json, tol),
        Command::Gen {
            kind,
            dim,
            seed,
            rank_p,
            rank_q,
            entry_bound,
            d10,
            d01,
            d11,
            d00,
            blocks,
            conjugate,
            out,
        } => gen::run(gen::GenArgs {
            kind,
            dim,
            seed,
            rank_p,
            rank_q,
            entry_bound,
            d10,
            d01,
            d11,
            d00,
            blocks,
            conjugate,
            out,
        }),
        Command::Lemma {
            max_n,
            numeric_samples,
            seed,
            corpus,
        } => lemma::run(max_n, numeric_samples, seed, corpus.as_deref()),
        Command::Spectrum { input, tol } => spectrum::run(&input, tol),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
