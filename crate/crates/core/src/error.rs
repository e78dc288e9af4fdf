use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("element is not integral")]
    NotIntegral,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("corrupt catalog data: {0}")]
    Catalog(String),
    #[error("unknown field label `{0}`")]
    UnknownField(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("singular curve model: {0}")]
    Singular(String),
    #[error("Hasse bound violated: t = {t}, q = {q}")]
    Hasse { t: String, q: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn catalog(msg: impl Into<String>) -> Self {
        Error::Catalog(msg.into())
    }
}
