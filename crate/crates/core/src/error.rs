use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vertex {vertex} is outside the index set [1, {m}]")]
    IndexOutOfRange { vertex: usize, m: usize },

    #[error("outside the theorem's scope: 2(dim K + 1) < m fails (dim K = {dim}, m = {m})")]
    OutOfScope { dim: isize, m: usize },

    #[error("enumeration budget exceeded at level {level}: {size} simplices (budget {budget})")]
    Budget { level: usize, size: usize, budget: usize },

    #[error("simplicial set only materialized through level {have}, need {need}")]
    Truncated { have: usize, need: usize },

    #[error("boundary of boundary is nonzero in degree {degree}")]
    BoundaryViolation { degree: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("space is not connected (H_0 has rank {rank})")]
    Disconnected { rank: usize },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
