use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("accuracy error: {what} (achieved {achieved:e})")]
    Accuracy { what: String, achieved: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("critical level: {0}")]
    CriticalLevel(String),
    #[error("critical trajectory: {0}")]
    CriticalTrajectory(String),
    #[error("direction undefined: zero displacement")]
    UndefinedDirection,
    #[error("orbit hit a discontinuity: {0}")]
    Discontinuity(String),
    #[error("invariant failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
