use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("SVD failed to converge within {sweeps} Jacobi sweeps")]
    NoConvergence { sweeps: usize },

    #[error("input has no nonzero column; basis would be empty")]
    EmptyBasis,

    #[error("sketch collapsed at power-iteration step {step}: {detail}")]
    DegenerateSketch { step: usize, detail: String },

    #[error("projected sketch block is numerically rank deficient (sigma_min = {sigma_min:e}, tolerance {tolerance:e})")]
    RankDeficientSketch { sigma_min: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
