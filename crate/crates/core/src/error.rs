use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("index ({0}) is not admissible")]
    NotAdmissible(String),

    #[error("malformed binary word: {0}")]
    MalformedWord(String),

    #[error("divergent value: {0}")]
    Divergent(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("summation did not converge within {0} terms")]
    MaxTermsExceeded(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid precision context: {0}")]
    Context(String),
}
