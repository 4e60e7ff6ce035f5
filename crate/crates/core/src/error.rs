use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Bloch vector outside the unit ball (norm {norm})")]
    BallViolation { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid binary POVM: {0}")]
    InvalidPovm(String),

    #[error("states coincide (separation {separation:e}); no discrimination problem")]
    DegenerateScenario { separation: f64 },

    #[error("ensemble components do not average to the shared state (residual {residual:e})")]
    MismatchedAverage { residual: f64 },

    #[error("shared state is nearly singular (min eigenvalue {min_eigenvalue:e})")]
    NearSingularAverage { min_eigenvalue: f64 },

    #[error("outcome has zero probability ({prob:e}); conditional state undefined")]
    ZeroProbability { prob: f64 },

    #[error("document fields are inconsistent (residual {residual:e})")]
    InconsistentDocument { residual: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
