use thiserror::Error;

/// Every failure mode of the library.
///
/// Exponents and thresholds are carried as their printed form so the error
/// type stays independent of the integer backend.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("exponent {0} does not have a power-of-p denominator")]
    BadExponent(String),
    #[error("coefficient {0} is out of range")]
    CoefficientOutOfRange(String),
    #[error("ring descriptor mismatch")]
    DescriptorMismatch,
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("not divisible: v(x) = {numerator} < v(y) = {denominator}")]
    NotDivisible { numerator: String, denominator: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("no p-th root below precision: {0}")]
    NoRootBelowPrecision(String),
    #[error("tilt components {0} and {next} are not Frobenius-compatible", next = .0 + 1)]
    CompatibilityViolation(usize),
    #[error("module is not torsion: no maximal minor has exact valuation")]
    NotTorsion,
    #[error("operation unsupported in this characteristic mode: {0}")]
    ModeUnsupported(String),
    #[error("map is not almost surjective: elementary divisor valuation {0} reaches precision")]
    NotAlmostSurjective(String),
    #[error("section lift obstructed at level {level}: {reason}")]
    LiftObstructed { level: u32, reason: String },
    #[error("almost finite generation witness invalid: {0}")]
    WitnessInvalid(String),
    #[error("monomial basis is not integral: {0}")]
    NotIntegralBasis(String),
    #[error("root search exceeded budget of {budget} candidates")]
    RootSearchExceeded { budget: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
