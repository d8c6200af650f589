use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}")]
    InvalidModulus(u32),
    #[error("{a} is not a unit modulo {n}")]
    NotAUnit { a: u32, n: u32 },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("{l} does not divide {n}")]
    NotADivisor { l: u32, n: u32 },
    #[error("element {0} appears twice")]
    DuplicateElement(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty connection set")]
    EmptySet,
    #[error("expected a connection set of size 4, got {0}")]
    BadValency(usize),
    #[error("Haar graph H(Z_{n}, {set}) is disconnected")]
    Disconnected { n: u32, set: String },
    #[error("modulus {0} is odd")]
    OddModulus(u32),
    #[error("group order {estimate} exceeds the enumeration cap {cap}")]
    ResourceExceeded { estimate: u128, cap: u128 },
    #[error("points of the seed lie in different orbits")]
    NotTransitive,
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}
