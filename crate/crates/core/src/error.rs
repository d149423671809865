use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("field order {0} exceeds the supported maximum of 65536")]
    FieldTooLarge(u64),

    #[error("modulus is not irreducible over GF({p}): {modulus:?}")]
    ReducibleModulus { p: u32, modulus: Vec<u32> },

    #[error("operands belong to different fields ({left} vs {right})")]
    FieldMismatch { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("field element index {index} out of range for a field of order {order}")]
    ElementOutOfRange { index: u32, order: u32 },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("invalid curve parameters: {0}")]
    InvalidCurve(String),

    #[error("semigroup <{0}, {1}> has infinitely many gaps (gcd != 1)")]
    InfiniteGaps(u64, u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty evaluation set")]
    EmptyEvaluationSet,

    #[error("generator matrix is rank deficient: {rows} rows but rank {rank}")]
    RankDeficient { rows: usize, rank: usize },

    #[error("enumeration budget exceeded: {needed} codewords > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("code is not Hermitian self-orthogonal: rows {0} and {1} have nonzero Hermitian product")]
    NotSelfOrthogonal(usize, usize),

    #[error("matrix file parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
