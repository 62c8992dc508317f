use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("invalid algebra `{name}`: {reason}")]
    Algebra { name: String, reason: String },

    #[error("arity mismatch for `{symbol}`: expected {expected} arguments, got {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("variable x{index} out of range ({available} assigned)")]
    VariableOutOfRange { index: usize, available: usize },

    #[error("element {element} out of range for carrier of size {size}")]
    ElementOutOfRange { element: usize, size: usize },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("{what} of size {requested} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("step budget of {budget} exhausted while {during}")]
    BudgetExhausted { budget: u64, during: &'static str },

    #[error("partition is not compatible with `{symbol}`: arguments {left:?} and {right:?} are related but map to {image_left} and {image_right}")]
    NotCompatible {
        symbol: String,
        left: Vec<usize>,
        right: Vec<usize>,
        image_left: usize,
        image_right: usize,
    },

    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("map is not surjective: element {0} of the codomain is missed")]
    NotSurjective(usize),

    #[error("not a subdirect product: coordinate {coordinate} misses element {missing}")]
    NotSubdirect { coordinate: usize, missing: usize },

    #[error("missing reduct: {0}")]
    MissingReduct(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
