use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("closure failure: coefficient feeding degree {degree} is {coefficient}, expected 0")]
    Closure { degree: usize, coefficient: String },

    #[error("eigenvalue {re} + {im}i violates realness of the algebraic sector")]
    Realness { re: f64, im: f64 },

    #[error("duality failure: {0}")]
    Duality(String),

    #[error("Taylor expansion to power {available} is insufficient; power {required} is required")]
    InsufficientTaylorOrder { required: usize, available: usize },

    #[error("no sign change in search bracket: {0}")]
    Bracket(String),

    #[error("branch or contour error: {0}")]
    Contour(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("ill-conditioned fit (condition number {condition:.3e}): {detail}")]
    IllConditioned { condition: f64, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Wraps an error with the pipeline stage and parameters that produced it.
    pub fn in_stage(self, stage: impl Into<String>) -> Self {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: impl FnOnce() -> String) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|e| e.in_stage(stage()))
    }
}
