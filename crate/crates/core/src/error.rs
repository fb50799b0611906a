use thiserror::Error;

use crate::instance::Edge;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },

    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },

    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("weight overflow: {0}")]
    WeightOverflow(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge {0} is not part of the instance")]
    UnknownEdge(Edge),

    #[error("instance is not complete: {missing} edge(s) missing (use --allow-incomplete to embed)")]
    IncompleteInstance { missing: usize },

    #[error("graph is disconnected")]
    DisconnectedGraph,

    #[error("instance too large: n = {n} exceeds the limit {limit} of {what}")]
    InstanceTooLarge { what: &'static str, n: usize, limit: usize },

    #[error("invalid exchange: {0}")]
    InvalidExchange(String),

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("no exchange sequence found from {from:?} to {to:?}")]
    DecompositionFailure { from: Vec<usize>, to: Vec<usize> },
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }

    /// Strips any line-number wrapper.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
