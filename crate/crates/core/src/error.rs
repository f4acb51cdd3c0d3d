use thiserror::Error;

/// Errors raised by geometry, model assembly, solvers and I/O.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("antiparallel tangents: parallel transport undefined")]
    AntiparallelTangents,
    #[error("turning singularity at bend {bend:?}: edges folded back")]
    TurningSingularity { bend: Option<usize> },
    #[error("non-positive rest length on edge {edge:?}")]
    ZeroRestLength { edge: Option<usize> },
    #[error("too few nodes: need at least 2, got {0}")]
    TooFewNodes(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid bend ({edge_i}, {edge_j}, center {center}): {reason}")]
    InvalidBend {
        edge_i: usize,
        edge_j: usize,
        center: usize,
        reason: String,
    },
    #[error("invalid edge {edge}: {reason}")]
    InvalidEdge { edge: usize, reason: String },
    #[error("edge {edge} is not incident to node {node}")]
    NotIncident { edge: usize, node: usize },
    #[error("degenerate (zero-length) edge {0}")]
    DegenerateEdge(usize),
    #[error("Newton iteration stalled after {iters} iterations (residual {residual:e})")]
    NewtonStalled { iters: usize, residual: f64 },
    #[error("sparse linear solve failed: matrix singular")]
    LinearSolveSingular,
    #[error("non-finite value in state")]
    NonFiniteState,
    #[error("final total energy too small to normalise ({0:e})")]
    ZeroFinalEnergy(f64),
    #[error("value {0} out of range")]
    OutOfRange(f64),
    #[error("unknown kind '{0}'")]
    UnknownKind(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Attach an element index to a geometry singularity.
    pub fn at_bend(self, bend: usize) -> Self {
        match self {
            Error::TurningSingularity { bend: None } => Error::TurningSingularity { bend: Some(bend) },
            other => other,
        }
    }

    pub fn at_edge(self, edge: usize) -> Self {
        match self {
            Error::ZeroRestLength { edge: None } => Error::ZeroRestLength { edge: Some(edge) },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
