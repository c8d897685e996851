use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Variant names double as the stable error
/// names reported by the command line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different rings: {0}")]
    RingMismatch(String),
    #[error("element {0} is not a unit")]
    NotAUnit(String),
    #[error("element {element} is not divisible by q^{power}")]
    NotDivisible { element: String, power: u32 },
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("polynomial is not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("no solution while lifting: {0}")]
    NoSolution(String),
    #[error("order is not defined over the infinite ring {0}")]
    InfiniteCoefficientRing(String),
    #[error("no k <= {cap} with f^k = T")]
    NotFoundWithinCap { cap: u64 },
    #[error("Witt integrality violated at component {component}: {detail}")]
    IntegralityViolation { component: usize, detail: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("kernel mismatch: {0}")]
    KernelMismatch(String),
    #[error("kernel K(n={n}, r={r}) is outside the abelian regime 2r >= n")]
    NotAbelian { n: u32, r: u32 },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("adjoint routes disagree: {0}")]
    AdjointMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::RingMismatch(_) => "RingMismatch",
            Error::NotAUnit(_) => "NotAUnit",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::UnsupportedRing(_) => "UnsupportedRing",
            Error::InvalidRing(_) => "InvalidRing",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::NotAnAutomorphism(_) => "NotAnAutomorphism",
            Error::NoSolution(_) => "NoSolution",
            Error::InfiniteCoefficientRing(_) => "InfiniteCoefficientRing",
            Error::NotFoundWithinCap { .. } => "NotFoundWithinCap",
            Error::IntegralityViolation { .. } => "IntegralityViolation",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::KernelMismatch(_) => "KernelMismatch",
            Error::NotAbelian { .. } => "NotAbelian",
            Error::OutOfRange(_) => "OutOfRange",
            Error::AdjointMismatch(_) => "AdjointMismatch",
            Error::Parse(_) => "Parse",
        }
    }
}
