use core::fmt;

/// Errors raised by the sketching core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A configuration value is outside its admissible range.
    InvalidParameter(&'static str),
    /// Caller-supplied data violates an input contract.
    InvalidInput(&'static str),
    /// The alphabet/k combination does not fit under the hash modulus.
    KmerSpaceTooLarge { alphabet_size: usize, k: usize },
    /// An exact (oracle) computation was asked for a k-mer space above its guard.
    OracleScale {
        alphabet_size: usize,
        k: usize,
        limit: u64,
    },
    /// Vector dimensions disagree.
    DimensionMismatch { left: usize, right: usize },
    /// Normalisation of an all-zero vector.
    Degenerate,
    /// Two sequences in a batch share an identifier.
    DuplicateId(alloc::string::String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::KmerSpaceTooLarge { alphabet_size, k } => write!(
                f,
                "k-mer space {alphabet_size}^{k} exceeds the hash modulus"
            ),
            Error::OracleScale {
                alphabet_size,
                k,
                limit,
            } => write!(
                f,
                "k-mer space {alphabet_size}^{k} is above the exact-oracle limit of {limit}"
            ),
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::Degenerate => f.write_str("cannot normalise an all-zero vector"),
            Error::DuplicateId(id) => write!(f, "duplicate sequence id `{id}`"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
