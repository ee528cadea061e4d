use thiserror::Error;

/// Errors reported by the library.
///
/// Domain errors (a well-formed input that fails a mathematical
/// precondition) are distinguished from parse errors so that callers can
/// map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be monic of degree {expected}, got degree {found}")]
    ModulusDegree { expected: usize, found: usize },
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("field order p^r does not fit in 64 bits")]
    FieldTooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    GcdUndefined,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("polynomial does not annihilate the matrix")]
    NotAnnihilating,
    #[error("monomial {monomial} is not of the form c*X_i^(q^m)")]
    MixedOrNonQPowerTerm { monomial: String },
    #[error("determinant is not a nonzero constant")]
    NotUnimodular,
    #[error("row gcd is not a nonzero constant")]
    NotUnimodularRow,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("matrix does not have the claimed order {order}")]
    OrderViolated { order: u64 },
    #[error("field characteristic divides the order {order}")]
    CharDividesOrder { order: u64 },
    #[error("kernel rank {found} differs from expected rank {expected}")]
    KernelRankMismatch { expected: usize, found: usize },
    #[error("principal minor for index set {subset:?} is not 1")]
    PrincipalMinorNotOne { subset: Vec<usize> },
    #[error("Jacobian determinant is not a nonzero constant")]
    JacobianNotConstant,
    #[error("monomial {monomial} mixes several variables")]
    MixedTerm { monomial: String },
    #[error("map is not triangular: {0}")]
    NotTriangular(String),
    #[error("linear part is not the identity")]
    LinearPartNotIdentity,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error schema.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ModulusDegree { .. } => "ModulusDegree",
            Error::ReducibleModulus { .. } => "ReducibleModulus",
            Error::FieldTooLarge => "FieldTooLarge",
            Error::DivisionByZero => "DivisionByZero",
            Error::GcdUndefined => "GcdUndefined",
            Error::FieldMismatch => "FieldMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotSquare => "NotSquare",
            Error::NotSquarefree => "NotSquarefree",
            Error::NotIrreducible => "NotIrreducible",
            Error::NotAnnihilating => "NotAnnihilating",
            Error::MixedOrNonQPowerTerm { .. } => "MixedOrNonQPowerTerm",
            Error::NotUnimodular => "NotUnimodular",
            Error::NotUnimodularRow => "NotUnimodularRow",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::OrderViolated { .. } => "OrderViolated",
            Error::CharDividesOrder { .. } => "CharDividesOrder",
            Error::KernelRankMismatch { .. } => "KernelRankMismatch",
            Error::PrincipalMinorNotOne { .. } => "PrincipalMinorNotOne",
            Error::JacobianNotConstant => "JacobianNotConstant",
            Error::MixedTerm { .. } => "MixedTerm",
            Error::NotTriangular(_) => "NotTriangular",
            Error::LinearPartNotIdentity => "LinearPartNotIdentity",
            Error::Parse(_) => "Parse",
        }
    }

    /// True for malformed input text, as opposed to a domain failure.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
