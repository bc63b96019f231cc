use std::fmt;

/// Errors raised by the exact arithmetic, series, ball and summation layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    /// The divisor ball of a ball division contains (or may contain) zero.
    BallContainsZero,
    /// A value could not be parsed as an exact rational.
    Parse(String),
    /// A coefficient of a series asserted nonnegative is negative.
    NegativeCoefficient {
        index: usize,
    },
    /// A majorant solver needs a vanishing constant term.
    NonzeroConstantTerm(&'static str),
    /// The inputs of a majorant transfer check are not in the `≪` relation.
    HypothesisViolation(String),
    /// The evaluation point could not be certified inside the disk of convergence.
    Certification(String),
    /// The working precision is too low for the error analysis to close.
    PrecisionFailure(String),
    /// A documented precondition does not hold.
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::BallContainsZero => write!(f, "divisor ball contains zero"),
            Error::Parse(s) => write!(f, "cannot parse {s:?} as a rational"),
            Error::NegativeCoefficient { index } => {
                write!(f, "coefficient {index} of a nonnegative series is negative")
            }
            Error::NonzeroConstantTerm(which) => {
                write!(f, "constant term of {which} must vanish")
            }
            Error::HypothesisViolation(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::Certification(msg) => write!(f, "cannot certify evaluation point: {msg}"),
            Error::PrecisionFailure(msg) => write!(f, "precision failure: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
