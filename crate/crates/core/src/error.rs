use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("minimal polynomial is reducible: found factor {factor}")]
    ReducibleDetected { factor: String },
    #[error("irreducibility of a degree {degree} polynomial cannot be checked; construct the field with the assume-irreducible flag")]
    IrreducibilityUnchecked { degree: usize },
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("the zero ideal is not representable")]
    ZeroIdeal,
    #[error("Z[theta] is not maximal at p = {p}; the field is outside the monogenic contract")]
    NonMonogenicAtP { p: u64 },
    #[error("ideal is not square-free")]
    NotSquareFree,
    #[error("grid radius {have} is too small; need at least {need}")]
    RadiusTooSmall { need: u64, have: u64 },
    #[error("sieve disagrees with the factorization oracle at {count} sample(s), first at {first}")]
    MismatchFound { count: usize, first: String },
    #[error("eigenvalue relation violated: {detail}")]
    EigenrelationViolated { detail: String },
    #[error("exponent k must be at least {min}, got {k}")]
    BadExponent { k: u32, min: u32 },
    #[error("number {0} is too large to factor at desk scale")]
    TooLarge(String),
    #[error("unsupported dimension {d} for this output")]
    UnsupportedDimension { d: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegreeZero => "DegreeZero",
            Error::NotMonic => "NotMonic",
            Error::ReducibleDetected { .. } => "ReducibleDetected",
            Error::IrreducibilityUnchecked { .. } => "IrreducibilityUnchecked",
            Error::FieldMismatch => "FieldMismatch",
            Error::ZeroIdeal => "ZeroIdeal",
            Error::NonMonogenicAtP { .. } => "NonMonogenicAtP",
            Error::NotSquareFree => "NotSquareFree",
            Error::RadiusTooSmall { .. } => "RadiusTooSmall",
            Error::MismatchFound { .. } => "MismatchFound",
            Error::EigenrelationViolated { .. } => "EigenrelationViolated",
            Error::BadExponent { .. } => "BadExponent",
            Error::TooLarge(_) => "TooLarge",
            Error::UnsupportedDimension { .. } => "UnsupportedDimension",
            Error::Parse(_) => "Parse",
        }
    }
}
