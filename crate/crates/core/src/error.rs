use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeModulus(u64),
    #[error("characteristic must be an odd prime, got {0}")]
    OddPrimeRequired(u64),
    #[error("field of size {size} exceeds the table limit {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("zero has no discrete logarithm")]
    ZeroElement,
    #[error("{n} does not divide {order}")]
    BadModulus { n: u64, order: u64 },
    #[error("element does not lie in the requested field")]
    DomainMismatch,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("period spectrum is not of the arc form {{-M+2q, -M+q, -M}}")]
    NotThreeValued,
    #[error("base point {0} is not on the conic")]
    BadBasePoint(u64),
    #[error("no partner exponent found for u = {0}")]
    NoPartner(u64),
    #[error("character-sum identity violated at c = {0}")]
    IdentityViolated(u64),
    #[error("malformed difference set: {0}")]
    MalformedX(String),
    #[error("eigenvalue for class {0} is not rational")]
    IrrationalEigenvalue(u64),
    #[error("field of size {0} is too large for direct adjacency counting")]
    TooLargeForDirect(u64),
    #[error("no element of order {m} in F_{{{p}^3}}")]
    NoOrderMElement { p: u64, m: u64 },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("table cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
