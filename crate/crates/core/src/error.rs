use thiserror::Error;

/// Errors reported by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} out of range (supported: 1..=16)")]
    DegreeOutOfRange(u32),

    #[error("polynomial 0x{modulus:x} is not a primitive degree-{n} polynomial")]
    NotPrimitive { n: u32, modulus: u32 },

    #[error("element 0x{value:x} out of range for GF(2^{n})")]
    ElementOutOfRange { n: u32, value: u32 },

    #[error("inverse of zero")]
    InverseOfZero,

    #[error("negative power of zero")]
    NegativePowerOfZero,

    #[error("exponent {exponent} out of range (must be <= {max})")]
    ExponentOutOfRange { exponent: u64, max: u64 },

    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("modification step must be nonzero")]
    ZeroModification,

    #[error("infeasible request: {0}")]
    Infeasible(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal arithmetic error: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
