use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A ring axiom or map law failed; `witness` is the offending tuple.
    #[error("validation failed: {law} does not hold at {witness}")]
    Validation { law: String, witness: String },

    #[error("ring has {size} elements, above the enumeration cap of {cap}")]
    Size { size: usize, cap: usize },

    #[error("backend: {0}")]
    Backend(String),

    #[error("index error: need 0 <= i <= j, got i={i}, j={j}")]
    Index { i: usize, j: usize },

    #[error("{what} = {value} exceeds cap {cap}")]
    Cap { what: String, value: u128, cap: u128 },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("not a {side} ideal: {detail}")]
    NotIdeal { side: &'static str, detail: String },

    #[error("hypothesis {hypothesis} not satisfied: {detail}")]
    Hypothesis { hypothesis: String, detail: String },

    #[error("descriptor {descriptor} does not apply to {ring}")]
    Descriptor { descriptor: String, ring: String },

    #[error("cannot parse {input:?}: expected {expected}")]
    Parse { input: String, expected: String },
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, value: u128, cap: u128) -> Self {
        Error::Cap {
            what: what.into(),
            value,
            cap,
        }
    }

    pub fn parse(input: &str, expected: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            expected: expected.into(),
        }
    }

    pub(crate) fn backend_infinite(op: &str) -> Self {
        Error::Backend(format!("{op} needs an enumerable ring"))
    }
}
