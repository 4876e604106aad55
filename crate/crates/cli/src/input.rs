use std::fmt;
use std::fs;
use std::path::Path;

use stochlang::cra::{compile_sre, LinearCra};
use stochlang::sre::SreFile;
use stochlang::{Alphabet, Error};

use crate::{EXIT_INPUT, EXIT_RUNTIME};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    /// Failure while computing.
    Runtime(String),
    Lib(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::Lib(e) => match e {
                Error::Alphabet(_)
                | Error::EmptyWord
                | Error::Parse { .. }
                | Error::Weight(_)
                | Error::InvalidParameter(_)
                | Error::NegativeWeights
                | Error::Format { .. } => EXIT_INPUT,
                Error::Normalization { .. }
                | Error::BudgetExceeded { .. }
                | Error::EmptySample
                | Error::SingularSystem { .. }
                | Error::ExhaustedSource { .. } => EXIT_RUNTIME,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Runtime(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

/// Expression file, with the declared alphabet optionally replaced.
pub fn load_sre(path: &Path, alphabet: Option<&str>) -> CliResult<SreFile> {
    let mut f = SreFile::parse(&read(path)?)?;
    if let Some(symbols) = alphabet {
        let a = Alphabet::parse(symbols)?;
        f.expr.check_alphabet(&a)?;
        f.alphabet = a;
    }
    Ok(f)
}

/// An automaton file, or an expression file compiled to one.
pub fn load_automaton(path: &Path, alphabet: Option<&str>) -> CliResult<LinearCra> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.split_whitespace().next() == Some("cra") {
        Ok(LinearCra::parse(&text)?)
    } else {
        let f = load_sre(path, alphabet)?;
        Ok(compile_sre(&f.expr, &f.alphabet)?)
    }
}
