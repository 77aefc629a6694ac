use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry {value} at ({row},{col}) is not reduced modulo {modulus}")]
    UnreducedEntry {
        row: usize,
        col: usize,
        value: i64,
        modulus: u64,
    },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("cyclic order must be at least 2, got {0}")]
    InvalidOrder(u64),
    #[error("element {0:?} does not belong to the group")]
    NotAnElement(Vec<u64>),
    #[error("homomorphism is not well defined: {0}")]
    IllDefinedHom(String),
    #[error("subgroup is not contained in the ambient group")]
    NotASubgroup,
    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("invalid prime parameter p = {p}: {reason}")]
    InvalidPrime { p: u64, reason: String },
    #[error("module map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("group action is not a homomorphism: {0}")]
    BadAction(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
