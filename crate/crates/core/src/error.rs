use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    /// The brute-force oracle refuses inputs above its configured ceiling so
    /// it cannot sneak into production paths.
    #[error("oracle ceiling exceeded: n={n} is above the brute-force limit {ceiling}")]
    OracleCeiling { n: u32, ceiling: u32 },
}

pub type Result<T> = std::result::Result<T, CoreError>;
