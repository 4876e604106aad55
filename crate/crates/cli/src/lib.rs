//! Command-line front end. [`run`] executes one invocation against arbitrary
//! output streams and returns the process exit code:
//! 0 success or Accept, 1 Reject (or not stochastic), 2 input error,
//! 3 runtime or budget error.

mod bench;
mod commands;
mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use input::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(name = "stochlang", version, about = "Distributions over strings: expressions, automata, identity tests")]
pub struct Cli {
    /// Output style for result records.
    #[arg(long, value_enum, global = true, default_value_t = Format::Records)]
    pub format: Format,

    /// Replace the alphabet declared in expression files.
    #[arg(long, global = true)]
    pub alphabet: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    L1,
    Linf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Normalization {
    Retained,
    Drawn,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print an expression file in canonical form.
    Parse { file: PathBuf },

    /// Probability of a word.
    Eval {
        file: PathBuf,
        word: String,
        /// Evaluate through the compiled automaton.
        #[arg(long)]
        via_cra: bool,
    },

    /// Compile an expression into an automaton file.
    Compile { file: PathBuf },

    /// Total mass of an automaton or expression, optionally restricted to a
    /// regular language.
    Mass {
        file: PathBuf,
        #[arg(long)]
        dfa: Option<PathBuf>,
        /// Length of the brute-force cross-check sum.
        #[arg(long, default_value_t = 14)]
        cross_check_length: usize,
    },

    /// Decide whether an automaton defines a probability distribution.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },

    /// Draw words from an expression.
    Sample {
        file: PathBuf,
        #[arg(short = 'n', long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Start with an `alphabet:` header so the output can be replayed.
        #[arg(long)]
        replay_header: bool,
    },

    /// Identity test against a reference expression.
    Test {
        reference: PathBuf,
        /// `self`, `sre:<file>`, `replay:<file>` or `planted:<distance>`.
        #[arg(long, default_value = "self")]
        source: String,
        #[arg(long, value_enum, default_value_t = Mode::L1)]
        mode: Mode,
        #[arg(long, default_value_t = 0.3)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Fixed number of draws (stage-2 draws for `linf`).
        #[arg(long)]
        samples: Option<u64>,
        /// Use the `8k/(ε₂−ε₁)²` sample bound (l1 only).
        #[arg(long, conflicts_with = "samples")]
        conservative: bool,
        /// Inner thresholds `ε₁,ε₂` (l1 only).
        #[arg(long, value_parser = parse_pair)]
        thresholds: Option<(f64, f64)>,
        #[arg(long, value_enum, default_value_t = Normalization::Retained)]
        normalization: Normalization,
        #[arg(long, default_value_t = stochlang::DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        /// Report wall-clock time (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },

    /// Geometric-mixture approximation of an expression.
    Approx {
        file: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = stochlang::DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        /// Print the mixture as an expression instead of component lines.
        #[arg(long)]
        sre: bool,
    },

    /// Acceptance rates over a corpus of expression files.
    Bench {
        corpus: PathBuf,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.3)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Fill the mean_ms column (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected two numbers separated by a comma")?;
    let a = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match commands::dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
