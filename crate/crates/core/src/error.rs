use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },

    #[error("{op}: dimension mismatch ({left} vs {right})")]
    Dimension { op: String, left: String, right: String },

    #[error("matrix must have at least one row and one column")]
    Empty,

    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },

    #[error("negative entry {value} at ({row}, {col}) in an adjacency matrix")]
    NegativeEntry { row: usize, col: usize, value: String },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid split: {0}")]
    Split(String),

    #[error("no edge from {from} to {to} with index {index}")]
    NoSuchEdge { from: usize, to: usize, index: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("group has no distinguished element")]
    MissingDistinguished,

    #[error("word is not in the language of the presentation")]
    NotInLanguage,

    #[error("invalid labelled graph: {0}")]
    Graph(String),

    #[error("invalid block map: {0}")]
    BlockMap(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dim_err(op: impl Into<String>, left: impl ToString, right: impl ToString) -> Error {
    Error::Dimension { op: op.into(), left: left.to_string(), right: right.to_string() }
}
