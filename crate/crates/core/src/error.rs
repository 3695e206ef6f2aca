use thiserror::Error;

/// Errors raised anywhere in the translation and analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("frequency bound {0} is outside [0,1]")]
    FrequencyOutOfRange(String),
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("formula is outside the supported fragment (until under globally): {0}")]
    NotInFragment(String),
    #[error("atomic proposition `{0}` is not in the alphabet")]
    UnknownAtom(String),
    #[error("{what} exceeded the state cap of {cap}")]
    StateCap { what: &'static str, cap: usize },
    #[error("model file, line {line}: {msg}")]
    Model { line: usize, msg: String },
    #[error("malformed lasso: {0}")]
    Lasso(String),
    #[error("automaton has no transition for letter {letter} from state {state}")]
    AlphabetMismatch { state: usize, letter: String },
    #[error("linear program: {0}")]
    Lp(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
