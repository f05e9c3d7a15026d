//! Error type shared by the whole crate.

use thiserror::Error;

/// Everything that can go wrong when building or combining elements.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrwError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("precision {0} is out of range (need 1 <= M and p^M < 2^63)")]
    PrecisionOutOfRange(u32),
    #[error("operands come from different contexts: {0}")]
    ContextMismatch(&'static str),
    #[error("variable index {0} is out of range (variables are numbered 1..=n)")]
    IndexOutOfRange(usize),
    #[error("index {0} is not in the support of the weight")]
    IndexNotInSupport(usize),
    #[error("duplicate index {0} in partition")]
    DuplicateIndex(usize),
    #[error("the zero weight has no minimal index")]
    ZeroWeight,
    #[error("weight entry denominator must be a power of p={0}")]
    DenominatorNotPPower(u32),
    #[error("denominator is divisible by p, no inverse mod p^M")]
    DenominatorDivisibleByP,
    #[error("weight has fractional entries where an integral one is required")]
    NotIntegral,
    #[error("operation only applies in degree zero (empty partitions)")]
    PositiveDegree,
    #[error("element is not in the image of d on the fractional part")]
    NotInDfrpImage,
    #[error("epsilon must be positive")]
    EpsilonNotPositive,
    #[error("operation needs at least {0} variable(s)")]
    NeedsVariables(usize),
    #[error("element mixes summand classes; a pure int/frp/dfrp operand is required")]
    MixedClass,
    #[error("parameter m={0} must satisfy 1 <= m <= M-1={1}")]
    VerschiebungDepthOutOfRange(u32, u32),
    #[error("Witt vector has too few coordinates for this operation")]
    TooFewCoordinates,
}
