use thiserror::Error;

pub type Result<T, E = SimError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid volatility shape: {0}")]
    InvalidShape(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Core(#[from] volbreak_core::Error),
}

impl SimError {
    pub fn is_numerical(&self) -> bool {
        matches!(self, SimError::Core(e) if e.is_numerical())
    }
}
