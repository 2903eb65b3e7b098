use thiserror::Error;

use crate::rule::{AttrId, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}: attribute {attr} occurs twice in one left-hand side")]
    DuplicateAttribute { line: usize, attr: AttrId },
    #[error("rule system is empty")]
    EmptySystem,
    #[error("assignment is inconsistent on {attr}")]
    InconsistentAssignment { attr: AttrId },
    #[error("attribute {attr} does not occur in the rule system")]
    UnknownAttribute { attr: AttrId },
    #[error("value {value} is not admissible for {attr}")]
    InadmissibleValue { attr: AttrId, value: Value },
    #[error("tuple does not assign attribute {attr}")]
    NotTotal { attr: AttrId },
    #[error("enumeration of {size} tuples exceeds the cap of {cap}")]
    EnumerationCap { size: u128, cap: u128 },
    #[error("{what} exceeds the size cap of {cap}")]
    SizeCap { what: &'static str, cap: usize },
    #[error("restriction is empty")]
    EmptyRestriction,
    #[error("tree variant {variant} does not match problem {problem}")]
    VariantMismatch { variant: String, problem: String },
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("tree does not solve {problem}: {reason}")]
    NotSolving { problem: String, reason: String },
    #[error("tree was built for a different rule system (digest {found}, expected {expected})")]
    DigestMismatch { expected: String, found: String },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("random generation gave up after {0} attempts")]
    RetriesExhausted(usize),
    #[error("search cap exceeded after {states} states: depth lies in [{lower}, {upper}]")]
    CapExceeded {
        states: usize,
        lower: usize,
        upper: usize,
    },
    #[error("tree file: {0}")]
    TreeFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
