use thiserror::Error;

use crate::decomposition::Violation;
use crate::extraction::IndependentExtractionFailure;
use crate::graph::Biclique;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    /// An exact routine was asked to work on an instance above its configured size limit.
    #[error("{what}: instance size {size} exceeds the exact limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("graph is not bipartite (odd cycle {odd_cycle:?})")]
    NotBipartite { odd_cycle: Vec<usize> },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("decomposition is not valid: {0}")]
    InvalidDecomposition(Violation),

    #[error("graph contains K_{{{t},{t}}}: {witness}")]
    BicliquePresent { t: usize, witness: Biclique },

    #[error("bag of node {node} admits an induced matching of size {found} > {bound}")]
    MuExceeded {
        node: usize,
        found: usize,
        bound: usize,
        matching: Vec<(usize, usize)>,
    },

    #[error("independent-set extraction failed: {0}")]
    ExtractionFailed(Box<IndependentExtractionFailure>),

    /// A guarantee that the surrounding argument proves was not met. Always a bug.
    #[error("guarantee violated: {0}")]
    GuaranteeViolated(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
