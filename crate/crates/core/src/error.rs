use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("expected {expected} digit weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weight 0 must equal 1, got {0}")]
    FirstWeightNotOne(String),
    #[error("weight {index} has modulus {modulus}, expected 1")]
    NotUnitModulus { index: usize, modulus: f64 },
    #[error("malformed sequence literal: {0}")]
    MalformedLiteral(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{p} divides the base {base}")]
    PrimeDividesBase { p: u64, base: u64 },
    #[error("residue {residue} is not in F_{p}^x")]
    ResidueOutOfRange { residue: u64, p: u64 },
    #[error("twisted base {base}^{order} exceeds the supported digit count")]
    TwistTooLarge { base: u64, order: u64 },
    #[error("oracle bound exceeded: {requested} > {bound}")]
    OracleBound { requested: u64, bound: u64 },
    #[error("enumeration bound exceeded: {requested} > {bound}")]
    EnumerationBound { requested: u128, bound: u128 },
    #[error("argument must be positive")]
    NonPositiveArgument,
    #[error("sequence is not in the power-growth class (|d(b)| = {0})")]
    NotPowerClass(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("ring elements live in different rings (p = {0} and p = {1})")]
    RingMismatch(usize, usize),
    #[error("exponent 0 is not allowed in the index set")]
    ZeroIndex,
    #[error("coefficients C_1..C_(p-1) are not all equal")]
    AsymmetricExpansion,
    #[error("no power r in {{1, 2, 4}} makes the dominant eigenvalue real positive")]
    NoRealPower,
}
