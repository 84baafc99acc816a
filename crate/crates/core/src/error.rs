use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonolabError {
    #[error("dimension cap exceeded: {requested} > {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("not an operator: {rows}x{cols} matrix is not square")]
    NotAnOperator { rows: usize, cols: usize },

    #[error("Hermitian trace norm only (hermiticity defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("not normalized: norm^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unknown state label `{0}`")]
    UnknownLabel(String),

    #[error("two-qubit only: got dims {0:?}")]
    TwoQubitOnly(Vec<usize>),

    #[error("measure not computable for this input class: {0}")]
    NotComputable(String),

    #[error("weight undefined (zero denominator)")]
    WeightUndefined,

    #[error("not an entanglement triple: {0}")]
    NotEntanglementTriple(String),

    #[error("incomparable: {0}")]
    Incomparable(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, MonolabError>;
