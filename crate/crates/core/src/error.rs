use thiserror::Error;

use crate::turn::Turn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph contains a cycle through node {node}")]
    CycleDetected { node: String },

    #[error("graph is disconnected: node {node} is not reachable from the root")]
    DisconnectedGraph { node: String },

    #[error("arrowhead {arrow} must have exactly one neighbour, and that neighbour must be a vertex")]
    ArrowheadDegree { arrow: String },

    #[error("root vertex {root} is missing")]
    MissingRoot { root: String },

    #[error("multiplicity system has a non-integral solution at vertex {vertex} ({value})")]
    NonIntegralSolution { vertex: String, value: String },

    #[error("multiplicity system gives a non-positive value at vertex {vertex} ({value})")]
    NonPositiveMultiplicity { vertex: String, value: String },

    #[error("multiplicity system is singular")]
    SingularSystem,

    #[error("vertex {vertex} has more than one child without arrowheads")]
    MultipleDeadBranches { vertex: String },

    #[error("branch order is not nice below vertex {vertex}")]
    BranchOrderNotNice { vertex: String },

    #[error("invalid branch order: {reason}")]
    InvalidBranchOrder { reason: String },

    #[error("{from} -> {to} is not a directed edge")]
    EdgeNotDirected { from: String, to: String },

    #[error("vertex {vertex} is not in the invariant subgraph")]
    RegionUndefined { vertex: String },

    #[error("angle {beta} lies on a separatrix")]
    OnSeparatrix { beta: Turn },

    #[error("theta = {theta} is not a generic angle ({reason})")]
    NonGenericAngle { theta: Turn, reason: String },

    #[error("gyrograph property violated: {0}")]
    PropertyViolation(String),

    #[error("monodromy does not preserve the cycle subspace: {0}")]
    CycleLeak(String),

    #[error("cross-check mismatch: {0}")]
    Mismatch(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error: {0}")]
    SchemaError(String),

    #[error("reference error: {0}")]
    ReferenceError(String),

    #[error("computer algebra binary `{0}` not found and no fixture recorded")]
    BinaryMissing(String),

    #[error("computer algebra run failed: {0}")]
    CasError(String),

    #[error("resolution output is inconsistent: {0}")]
    InconsistentResolution(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CycleDetected { .. } => "CycleDetected",
            Error::DisconnectedGraph { .. } => "DisconnectedGraph",
            Error::ArrowheadDegree { .. } => "ArrowheadDegree",
            Error::MissingRoot { .. } => "MissingRoot",
            Error::NonIntegralSolution { .. } => "NonIntegralSolution",
            Error::NonPositiveMultiplicity { .. } => "NonPositiveMultiplicity",
            Error::SingularSystem => "SingularSystem",
            Error::MultipleDeadBranches { .. } => "MultipleDeadBranches",
            Error::BranchOrderNotNice { .. } => "BranchOrderNotNice",
            Error::InvalidBranchOrder { .. } => "InvalidBranchOrder",
            Error::EdgeNotDirected { .. } => "EdgeNotDirected",
            Error::RegionUndefined { .. } => "RegionUndefined",
            Error::OnSeparatrix { .. } => "OnSeparatrix",
            Error::NonGenericAngle { .. } => "NonGenericAngle",
            Error::PropertyViolation(_) => "PropertyViolation",
            Error::CycleLeak(_) => "CycleLeak",
            Error::Mismatch(_) => "Mismatch",
            Error::SyntaxError { .. } => "SyntaxError",
            Error::SchemaError(_) => "SchemaError",
            Error::ReferenceError(_) => "ReferenceError",
            Error::BinaryMissing(_) => "BinaryMissing",
            Error::CasError(_) => "CasError",
            Error::InconsistentResolution(_) => "InconsistentResolution",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
