use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("table dimension mismatch: {0}")]
    Dimension(String),
    #[error("letter `{0}` has no assigned element")]
    Unassigned(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("step {index}: {msg}")]
    Step { index: usize, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
