use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Variants marked "bug" are mathematically impossible and only fire when an
/// internal invariant is broken.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("field order {p}^{k} exceeds the cap {cap}")]
    CapExceeded { p: u64, k: u32, cap: u64 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("invalid field element encoding: {0}")]
    InvalidElement(String),
    #[error("matrix determinant is not 1")]
    NotSpecialLinear,
    #[error("representation must have at least one component")]
    EmptyRep,
    #[error("rank {0} is below the minimum of 2")]
    RankTooSmall(u32),
    #[error("estimated work {needed} exceeds budget {budget}")]
    WorkBudgetExceeded { needed: u128, budget: u128 },
    #[error("conjugated entry left the base field (bug)")]
    EntryLeftBaseField,
    #[error("odd number of absolutely irreducible orbits: {0} (bug)")]
    OddIrreducibleOrbitCount(u64),
    #[error("series has nonzero coefficient at degree {degree} inside the guard window")]
    SeriesNotPolynomial { degree: usize },
    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,
    #[error("value is not an integer: {0}")]
    NonIntegral(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
