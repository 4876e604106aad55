use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet error: {0}")]
    Alphabet(String),

    #[error("empty word: distributions are over non-empty strings")]
    EmptyWord,

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("cannot normalize: total mass {total} is not finite and positive")]
    Normalization { total: f64 },

    #[error("enumeration budget exceeded: {needed} words needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("empty sample: no retained draws")]
    EmptySample,

    #[error("singular linear system (pivot {pivot:e} at column {column})")]
    SingularSystem { pivot: f64, column: usize },

    #[error("weight error: {0}")]
    Weight(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("automaton has negative weights; the non-negative restriction is required")]
    NegativeWeights,

    #[error("sample source exhausted after {drawn} draws")]
    ExhaustedSource { drawn: u64 },

    #[error("malformed {kind} file, line {line}: {message}")]
    Format {
        kind: &'static str,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn format(kind: &'static str, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            kind,
            line,
            message: message.into(),
        }
    }
}
