//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(u32),

    #[error("spin configuration has {got} entries but the graph has {expected} vertices")]
    SizeMismatch { expected: usize, got: usize },

    #[error(
        "enumeration cap exceeded: n = {n} > cap = {cap}; \
         use the gadget-marginalized routines for larger instances"
    )]
    EnumerationCap { n: usize, cap: usize },

    #[error("state-space cap exceeded: {what} supports at most {cap} vertices, got {n}")]
    StateSpaceCap {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("{what}: retry limit of {limit} attempts exceeded")]
    RetryLimit { what: &'static str, limit: usize },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("base graph is not cubic: vertex {vertex} has degree {degree}")]
    NonCubicBase { vertex: u32, degree: usize },

    #[error("gadget kind mismatch: expected {expected}, layout is {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("graph has no bipartition labels")]
    MissingBipartition,

    #[error("mu must be positive, got {0}")]
    NonPositiveMu(String),

    #[error("unknown observable: {0}")]
    UnknownObservable(String),

    #[error("separation precondition fails at the supplied mu; minimal valid mu is {min_mu}")]
    SeparationFailed { min_mu: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
