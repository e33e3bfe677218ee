use thiserror::Error;

/// Errors raised by the estimation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("IRLS did not converge after {iterations} iterations (possible complete separation)")]
    NonConvergence { iterations: usize },

    #[error("weighted normal matrix is singular")]
    SingularInformation,

    #[error("energy is not finite at ({beta0}, {beta1})")]
    NonFiniteEnergy { beta0: f64, beta1: f64 },

    #[error("importance weights are degenerate (effective sample size {ess:.2} < 10)")]
    DegenerateWeights { ess: f64 },

    #[error("window is empty")]
    EmptyWindow,

    #[error("need at least {needed} values, got {got}")]
    TooFew { needed: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("row {row}: response must be 0 or 1")]
    NonBinaryResponse { row: usize },

    #[error("row {row}: value in column `{column}` is not a finite number")]
    NonNumericValue { row: usize, column: String },

    #[error("file contains no observations")]
    EmptyFile,

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite
                | Error::NonConvergence { .. }
                | Error::SingularInformation
                | Error::NonFiniteEnergy { .. }
                | Error::DegenerateWeights { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
