use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime (or prime power)")]
    NotPrime(u64),
    #[error("unsupported field order {0} (need 3 <= q <= 65536)")]
    UnsupportedOrder(u64),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("invalid field spec `{0}`")]
    FieldSpec(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element index {index} out of range for a field of order {q}")]
    ElementOutOfRange { index: u32, q: u32 },
    #[error("the quadratic character needs odd characteristic")]
    EvenCharacteristic,
    #[error("operation needs characteristic 2")]
    OddCharacteristic,
    #[error("value table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("value table is not a permutation")]
    NotPermutation,
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
}
