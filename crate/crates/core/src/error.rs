use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why an expression failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("nonlinear term in additive generator")]
    Nonlinear,
    #[error("expression is not a monomial (optionally followed by `- 1`)")]
    NonMonomial,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("shift index {index} out of range 1..={n}")]
    ShiftIndex { index: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension n = {0}; need n >= 1")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("family violation in generator {generator}: {reason}")]
    FamilyViolation { generator: usize, reason: String },

    #[error("term of order {found} where every term must have order {expected}")]
    OrderMismatch { expected: u32, found: u32 },

    #[error("non-integer entry in integer-only elimination")]
    NonIntegerInput,

    #[error("level {level} exceeds the ambient level {ambient}")]
    LevelOutOfRange { level: u32, ambient: u32 },

    #[error("staircase component {component} has {count} generators; the inclusion-exclusion limit is {limit}")]
    SubsetBlowUp { component: usize, count: usize, limit: usize },

    #[error("not eventually polynomial at this window: difference of order {order} is nonzero")]
    NotEventuallyPolynomial { order: usize },

    #[error("window of {len} values is too short for degree {max_degree}")]
    WindowTooShort { len: usize, max_degree: usize },

    #[error("polynomial degree {degree} exceeds the number of shift variables {n}")]
    DegreeExceeds { degree: usize, n: usize },

    #[error("malformed schedule: {0}")]
    Schedule(String),

    #[error("generalized-group axiom fails at level {level}: {detail}")]
    AxiomViolation { level: u32, detail: String },

    #[error("indicator for level {level} unresolved below horizon {horizon}")]
    IndicatorUnresolved { level: u32, horizon: u32 },

    #[error("oracle inconclusive at level {level}: shift bound reached {bound}")]
    OracleInconclusive { level: u32, bound: u32 },

    #[error("internal invariant failed: {0}")]
    Invariant(String),
}
