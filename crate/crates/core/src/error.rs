use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has {0} vertices, at most 64 are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("parse error at {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownGraph(String),
    #[error("catalog entry {name} failed its load-time check: {reason}")]
    Catalog { name: String, reason: String },
    #[error("enumeration of ({n},{r}) not supported: {reason}")]
    Unsupported { n: usize, r: usize, reason: String },
    #[error("input file {0} not found")]
    MissingInput(std::path::PathBuf),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
