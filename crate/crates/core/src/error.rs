use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("{p}^{r} exceeds the 63-bit modulus budget")]
    ModulusOverflow { p: u64, r: u32 },
    #[error("prime power exponent must be at least 1")]
    ZeroExponent,
    #[error("{value} is not invertible mod {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("requires odd prime, got {0}")]
    RequiresOddPrime(u64),
    #[error("ω has wrong order: expected {expected}, found {found}")]
    WrongOrder { expected: u64, found: u64 },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("p must divide n (p = {p}, n = {n})")]
    NotDivisor { p: u64, n: u64 },
    #[error("{d} does not divide {n}")]
    NotADivisorOfOrder { d: u64, n: u64 },
    #[error("n must be even, got {0}")]
    NotEven(u64),
    #[error("{m} is not coprime to {p}")]
    NotCoprime { m: u64, p: u64 },
    #[error("oracle bound exceeded: n = {n} > {bound}")]
    OracleBoundExceeded { n: u64, bound: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
