use thiserror::Error;

use crate::witness::Embedding;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the library.
///
/// Variants that carry certificates (`NotHFree`, `BiDensityViolation`,
/// `EmbedFailure`) box them so `Result` stays small on the hot paths.
#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("resource limit exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: u128 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An induced copy of the forbidden pattern was found.
    #[error("input graph is not H-free: induced copy found at {:?}", .0.map)]
    NotHFree(Box<Embedding>),

    /// The instance has too many induced copies of the pattern for the
    /// requested operation.
    #[error("too many induced copies of the pattern: {count} > {bound}")]
    NotSparseInH { count: u128, bound: String },

    /// A sampled search exhausted its budget without an outcome.
    #[error("search failed after {attempts} attempts: {detail}")]
    SearchFailure { attempts: usize, detail: String },

    /// A pair-finder could not produce a pair at some recursion level.
    #[error("pair finder failed at recursion level {level} on |U|={u_size}: {detail}")]
    FinderFailure {
        level: usize,
        u_size: usize,
        detail: String,
    },

    /// The bi-density hypothesis was observed to fail on a concrete pair.
    #[error("bi-density violated: |A|={}, |B|={}, color-1 edges {}", .0.a.len(), .0.b.len(), .0.edges)]
    BiDensityViolation(Box<DensityViolation>),

    #[error("embedding failed at step {}: {}", .0.step, .0.reason)]
    EmbedFailure(Box<crate::ramsey::EmbedFailure>),

    /// An internal invariant did not hold; always a bug or a dishonest finder.
    #[error("contract violated: {0}")]
    Contract(String),
}

/// A concrete pair of disjoint sets witnessing low color-1 density.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DensityViolation {
    pub a: crate::VertexSet,
    pub b: crate::VertexSet,
    pub edges: u64,
    /// The split step at which the violation was observed.
    pub step: usize,
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
