use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("entries m({a},{b}) = {first} and m({b},{a}) = {second} disagree")]
    NonSymmetric {
        a: String,
        b: String,
        first: String,
        second: String,
    },

    #[error("line {line}: label {value} for ({a},{b}) must be at least 2")]
    LabelTooSmall {
        line: usize,
        a: String,
        b: String,
        value: u64,
    },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("cannot parse word `{0}`")]
    BadWord(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    #[error("oracle inconsistency: {0}")]
    OracleInconsistent(String),

    #[error("fragment radius too small: {0}")]
    InsufficientRadius(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("expected a unique directed geodesic, found {0}")]
    NotUnique(usize),

    #[error("state limit of {0} exceeded")]
    StateLimit(usize),

    #[error("automaton error: {0}")]
    Automaton(String),

    #[error("word not accepted: {0}")]
    NotAccepted(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
