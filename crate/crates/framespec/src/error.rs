use thiserror::Error;

/// Error kinds surfaced by the toolkit. The CLI prints these as
/// `ERROR:<kind>: <message>` with the kind taken from [`Error::kind`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numerically singular matrix (condition estimate {cond:.3e}): {context}")]
    Singular { cond: f64, context: String },

    #[error("not a frame: {0}")]
    NotAFrame(String),

    #[error("not a Riesz basis: {0}")]
    NotARieszBasis(String),

    #[error("duality violated: {0}")]
    Duality(String),

    #[error("criterion void: {0}")]
    CriterionVoid(String),

    #[error("backend failure: {0}")]
    Backend(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-parsable kind tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Validation(_) => "validation",
            Error::Singular { .. } => "singular",
            Error::NotAFrame(_) => "not-a-frame",
            Error::NotARieszBasis(_) => "not-a-riesz-basis",
            Error::Duality(_) => "duality",
            Error::CriterionVoid(_) => "criterion-void",
            Error::Backend(_) => "backend",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Backend(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
