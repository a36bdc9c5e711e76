use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group too large: closure exceeded cap of {cap} elements")]
    TooLarge { cap: usize },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid subgroup data: {0}")]
    InvalidSubgroups(String),
    #[error("invalid measured space: {0}")]
    InvalidSpace(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("invalid graphing: {0}")]
    InvalidGraphing(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid relation system: {0}")]
    InvalidSystem(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {field}: {message}")]
    Input {
        path: String,
        field: String,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
