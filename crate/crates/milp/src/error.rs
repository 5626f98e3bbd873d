use thiserror::Error;

#[derive(Debug, Error)]
pub enum MilpError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("model has {found} binary variables, enumeration supports at most {max}")]
    TooManyBinaries { found: usize, max: usize },
    #[error("simplex failed to converge: {0}")]
    Numerical(String),
}
