use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size {0} outside 1..=9")]
    AlphabetSize(usize),
    #[error("letter index {letter} not in alphabet of size {size}")]
    LetterOutOfRange { letter: u8, size: usize },
    #[error("invalid letter {0:?} (expected a-i)")]
    InvalidLetter(char),
    #[error("word length {len} exceeds bound {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("word {0} is not Lyndon")]
    NotLyndon(String),
    #[error("single letter {0} has no standard factorization")]
    SingleLetter(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {p}^{k} does not fit in 64 bits")]
    ModulusOverflow { p: u64, k: u32 },
    #[error("ring or alphabet mismatch between operands")]
    Mismatch,
    #[error("constant term is not a unit")]
    NotInvertible,
    #[error("word of length {len} lies beyond truncation degree {trunc}")]
    BeyondTruncation { len: usize, trunc: usize },
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error("group word exceeds {0} factors")]
    GroupWordTooLong(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("Magnus coefficient of {word} in sigma({lyndon}) is not divisible by {p}^{exponent}")]
    Divisibility {
        word: String,
        lyndon: String,
        p: u64,
        exponent: u32,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
