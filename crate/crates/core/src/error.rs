use thiserror::Error;

/// Failures of the exact-arithmetic kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable sets differ: [{left}] vs [{right}]")]
    VarSetMismatch { left: String, right: String },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("at most {max} variables are supported, got {got}")]
    TooManyVariables { max: usize, got: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("monomial degree overflow (total degree must stay below 256)")]
    DegreeOverflow,
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("denominator vanishes identically")]
    DenominatorVanishes,
    #[error("denominator factor is not linear: {0}")]
    NonLinearFactor(String),
    #[error("pole at {0} = 0")]
    PoleAtZero(String),
    #[error("0/0 after canonicalization at {0} = 0 (internal invariant violated)")]
    IndeterminateInternal(String),
    #[error("constant term is not the square of a rational")]
    ConstantTermNotSquare,
    #[error("series is not invertible (zero constant term)")]
    NotInvertible,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expression is not a polynomial")]
    NotAPolynomial,
}

/// Failures of the geometric and combinatorial layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid Grassmannian parameters n={n}, k={k}")]
    InvalidDimensions { n: usize, k: usize },
    #[error("invalid fixed point {indices:?} for n={n}")]
    InvalidFixedPoint { n: usize, indices: Vec<usize> },
    #[error("fixed points belong to different Grassmannians")]
    MismatchedPoints,
    #[error("invalid chamber permutation {0:?}")]
    InvalidChamber(Vec<usize>),
    #[error("partition {parts:?} does not fit the {rows}x{cols} box")]
    PartitionOutOfBox {
        parts: Vec<usize>,
        rows: usize,
        cols: usize,
    },
    #[error("restriction of the weight function to a fixed point is not a polynomial")]
    NonPolynomialRestriction,
    #[error("scaled integral is not an integer: {0}")]
    NonIntegerResult(String),
    #[error("nonequivariant limit does not exist: {0}")]
    LimitDoesNotExist(String),
    #[error("cost {cost} exceeds the configured bound {bound}")]
    CostBoundExceeded { cost: u64, bound: u64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("truncation order {order} too small; need more than {needed}")]
    InsufficientOrder { order: u32, needed: u32 },
    #[error("path weight vanishes identically")]
    ZeroWeightEncountered,
}

pub type AlgebraResult<T> = std::result::Result<T, AlgebraError>;
pub type Result<T> = std::result::Result<T, EnvelopeError>;
