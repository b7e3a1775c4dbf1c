use thiserror::Error;

/// Errors surfaced by group, field and catalog construction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("group order exceeds the 128-bit range")]
    OrderOverflow,
    #[error("enumeration cap exceeded: order {order} > cap {cap}")]
    EnumerationCap { order: u128, cap: u128 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("point-set size cap exceeded: {0} points (max {1})")]
    SizeCap(u64, u64),
    #[error("singular matrix modulo {0}")]
    SingularMatrix(u64),
    #[error("permutation is not additive on the module")]
    NonAdditive,
    #[error("mixed characteristic: {0} vs {1}; use a product domain instead")]
    MixedCharacteristic(u64, u64),
    #[error("unsupported degree {0}: {1}")]
    UnsupportedDegree(u64, String),
    #[error("ambient group too large for conjugacy search: order {0}")]
    AmbientTooLarge(u128),
    #[error("subgroup enumeration cap exceeded: |G| = {0} > {1}")]
    SubgroupCap(u128, u128),
    #[error("not a subgroup of the ambient group: {0}")]
    NotASubgroup(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("catalog format: {0}")]
    CatalogFormat(String),
    #[error("catalog integrity: {0}")]
    CatalogIntegrity(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
