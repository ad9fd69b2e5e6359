use thiserror::Error;

/// Broad classification used by the command line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Precision,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not prime: {0}")]
    NotPrime(u64),
    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u64, right: u64 },
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("precision modulus {prime}^{exponent} does not fit in 62 bits")]
    ModulusTooLarge { prime: u64, exponent: u32 },
    #[error("indistinguishable from zero at precision")]
    ZeroAtPrecision,
    #[error("λ exceeds truncation degree {trunc_degree}")]
    LambdaExceedsTruncation { trunc_degree: usize },
    #[error("precision insufficient to evaluate f(0)")]
    ConstantTermUnresolved,
    #[error("raise precision: {0}")]
    RaisePrecision(String),
    #[error("component not oracle-representable (λ = 0, μ = {mu})")]
    NotOracleRepresentable { mu: u32 },
    #[error("characteristic element vanishes at precision (degree {degree})")]
    VanishingCharElement { degree: usize },
    #[error("singular reduction at q = {q} (model may be non-minimal)")]
    SingularReduction { q: u64 },
    #[error("coefficient not q-integral at q = {q}")]
    NotIntegral { q: u64 },
    #[error("field size {q} exceeds the exhaustive counting cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("Euler factor pole: 1 + a/q + 1/q^2 vanishes")]
    EulerFactorPole,
    #[error("no eigenvalue data")]
    NoEigenvalueData,
    #[error("invalid extension parameter: {0}")]
    InvalidExtension(String),
    #[error("𝔐 excludes places above p (place above {l})")]
    PlaceAboveP { l: u64 },
    #[error("convention violation at this place: implied exponent {exponent} < 0")]
    ConventionViolation { exponent: i64 },
    #[error("singular curve: discriminant vanishes")]
    SingularCurve,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ZeroAtPrecision
            | Error::LambdaExceedsTruncation { .. }
            | Error::ConstantTermUnresolved
            | Error::RaisePrecision(_)
            | Error::VanishingCharElement { .. }
            | Error::ModulusTooLarge { .. } => ErrorKind::Precision,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
