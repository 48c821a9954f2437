use thiserror::Error;

/// Errors raised by the engine. Variants carry enough context to report the
/// offending input without re-running the computation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: word for {relation} uses generator {generator}, outside the allowed support")]
    Support {
        line: usize,
        relation: String,
        generator: String,
    },

    #[error("line {line}: relative order {order} of {generator} is not prime")]
    NonPrimeOrder {
        line: usize,
        generator: String,
        order: u64,
    },

    #[error("presentation {name} is inconsistent: {detail}")]
    Inconsistent { name: String, detail: String },

    #[error("group of order {order} exceeds the element cap of {cap}")]
    CapExceeded { order: usize, cap: usize },

    #[error("group of order {order} is not a p-group")]
    NotPGroup { order: usize },

    #[error("group is not nilpotent")]
    NotNilpotent,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("map is not a homomorphism: f({x}*{y}) != f({x})*f({y})")]
    NotHomomorphism { x: usize, y: usize },

    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },

    #[error("map is not bijective")]
    NotBijective,

    #[error("automorphism order {actual} does not divide {expected}")]
    OrderMismatch { expected: u64, actual: u64 },

    #[error("invalid pair: {0}")]
    InvalidPair(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown catalog entry {0}")]
    UnknownEntry(String),

    #[error("catalog entry {0} is an extension slot with no presentation")]
    ExtensionSlot(String),

    #[error("catalog entry {id}: fingerprint mismatch ({detail})")]
    Fingerprint { id: String, detail: String },

    #[error("malformed group document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
