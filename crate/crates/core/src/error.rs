use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("object id {0} out of range")]
    ObjectOutOfRange(usize),

    #[error("duplicate object name `{0}`")]
    DuplicateObject(String),

    #[error(
        "fusion multiplicity N^{{{a},{b}}}_{{{c}}} = {n} is not supported; only multiplicity-free fusion rules are accepted"
    )]
    Multiplicity {
        a: String,
        b: String,
        c: String,
        n: usize,
    },

    #[error("data incomplete: missing {kind} symbol for admissible tuple {tuple}")]
    MissingSymbol { kind: &'static str, tuple: String },

    #[error("malformed category data: {0}")]
    Malformed(String),

    #[error("built-in category `{name}` failed self-certification: {detail}")]
    Certification { name: String, detail: String },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{kind} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        max: usize,
    },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("matrix for {0} is singular")]
    Singular(String),

    #[error("basis dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
