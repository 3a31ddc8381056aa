use thiserror::Error;

/// Errors raised by the arithmetic and the transfer-factor engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not Eisenstein over the unramified step: {0}")]
    NotEisenstein(String),
    #[error("residue characteristic 2 is only supported for Q_2 itself")]
    DyadicRamifiedUnsupported,
    #[error("valuation of zero requested")]
    ZeroValuation,
    #[error("valuation {valuation} lies outside the tracked precision {precision}")]
    PrecisionExhausted { valuation: i64, precision: u32 },
    #[error("oracle depth {depth} too small, need at least {needed}")]
    DepthTooSmall { depth: u32, needed: u32 },
    #[error("form coefficient is not fixed by the involution")]
    NonSymmetric,
    #[error("degenerate quadratic form")]
    Degenerate,
    #[error("value is not fixed by the involution: {0}")]
    NotInFixedField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("wild character data not supported")]
    WildInputUnsupported,
    #[error("Cayley transform has a pole at y = -1")]
    PoleAtMinusOne,
    #[error("inverse Cayley transform has a pole at X = 1")]
    PoleAtOne,
    #[error("index sets do not match: {0}")]
    IndexMismatch(String),
    #[error("stable classes do not match: {0}")]
    MatchFailure(String),
    #[error("delta is a square, the quadratic algebra would be split")]
    NotANonSquare,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
