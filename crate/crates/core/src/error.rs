use alloc::string::String;
use core::fmt;

/// Errors raised by kernel operations, doctrine operations and the free
/// constructions. Law *violations* found by oracles are not errors; they are
/// reported as verdicts with counterexamples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Endpoint mismatch (composition, pairing, reindexing, ...).
    Mismatch {
        context: &'static str,
        detail: String,
    },
    /// An operation needs a capability the doctrine does not carry.
    MissingCapability(&'static str),
    /// The base category lacks a piece of chosen structure.
    MissingStructure(&'static str),
    /// An enumeration would exceed the declared budget.
    Budget {
        what: &'static str,
        need: u128,
        budget: u128,
    },
    /// Structure tables failed validation at load.
    Validation(String),
    /// An invariant the library itself relies on broke.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Mismatch { context, detail } => {
                write!(f, "mismatch in {context}: {detail}")
            }
            Error::MissingCapability(c) => write!(f, "missing capability: {c}"),
            Error::MissingStructure(s) => write!(f, "missing chosen structure: {s}"),
            Error::Budget { what, need, budget } => {
                write!(f, "budget exceeded for {what}: need {need}, budget {budget}")
            }
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
