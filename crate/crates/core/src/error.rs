use std::path::PathBuf;

/// Errors produced anywhere in the estimation pipeline or the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Cholesky factorization hit a non-positive pivot.
    #[error("singular system: pivot {pivot:e} at row {index} is not positive")]
    SingularSystem { index: usize, pivot: f64 },

    #[error("oracle did not converge after {iterations} iterations (last step {last_step:e})")]
    OracleFailure { iterations: usize, last_step: f64 },

    #[error("degenerate estimate: {0}")]
    DegenerateEstimate(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error for {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by the numerical solve or a degenerate estimate,
    /// as opposed to bad arguments or unreadable data.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularSystem { .. } | Error::OracleFailure { .. } | Error::DegenerateEstimate(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
