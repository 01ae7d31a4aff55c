use thiserror::Error;

/// Errors shared across the library.
///
/// Variants are deliberately coarse: callers that need to distinguish, say,
/// a bad vertex label from a bad universe size can match on the variant,
/// while the CLI just maps everything onto an exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// A vertex label was outside `1..=n`.
    #[error("invalid element {element}: must lie in 1..={universe}")]
    InvalidElement { element: u64, universe: u32 },

    /// A universe size outside the supported `1..=30` range.
    #[error("unsupported universe size {0}: must lie in 1..=30")]
    UnsupportedUniverse(u64),

    /// An operation that materializes exponentially many sets was asked to
    /// exceed its cap.
    #[error("universe too large for {op}: n = {n} exceeds cap {cap}")]
    UniverseTooLarge { op: &'static str, n: u32, cap: u32 },

    /// The family was expected to be closed under taking subsets.
    #[error("family is not hereditary: {witness} is a member but a subset of it is not")]
    NotHereditary { witness: String },

    /// A weight table that must be nonincreasing in the set size was not.
    #[error("weight table is not monotone nonincreasing at size {index}")]
    NotMonotone { index: usize },

    /// A documented precondition did not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// Parameters outside their documented ranges.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A member set too large for the d = 5 weight rules.
    #[error("member {member} has size {size}: incidence weights are defined for sizes <= 4")]
    MemberTooLarge { member: String, size: u32 },

    /// A vertex whose neighborhood is smaller than the block size `d`.
    #[error("vertex {vertex} has neighborhood size {size} < d = {d}")]
    DegreeTooLow { vertex: u32, size: u32, d: u32 },

    /// The given vertex set is not an isolated pile of the family.
    #[error("not an isolated pile: {0}")]
    NotAnIsolatedPile(String),

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// File I/O with path context.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
