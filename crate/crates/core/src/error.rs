//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A cycle in the component carries an odd number of refraction edges, so
    /// no sign partition exists.
    #[error("odd refraction cycle: no consistent sign partition exists")]
    OddRefractionCycle,

    #[error("graph is not a forest")]
    NotAForest,

    #[error("graph is not a cycle")]
    NotACycle,

    #[error("{{{l}, {lp}}} is not an edge of a tree component")]
    NotATreeEdge { l: usize, lp: usize },

    #[error("toric promotion requires a graph with no refraction edges")]
    RefractionPresent,

    #[error("capacity exceeded: {what} = {got} is above the supported maximum {max}")]
    CapacityExceeded {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("orbit size {size} exceeds the rendering cap {cap}")]
    OrbitTooLarge { size: u64, cap: u64 },

    #[error("alcove rendering is implemented for n = 3 only, got n = {n}")]
    UnsupportedRank { n: usize },

    #[error("window entries must have pairwise distinct residues modulo n")]
    BadResidues,

    #[error("window entries must sum to n(n+1)/2 = {expected}, got {actual}")]
    BadSum { expected: i64, actual: i64 },

    /// Two computations that must always agree disagreed; indicates a bug.
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),

    #[error("root-of-unity average {average} does not match the direct count {direct}")]
    RootOfUnityMismatch { average: f64, direct: u64 },

    #[error("cyclic sieving requires even n >= 4, got n = {n}")]
    EvenNRequired { n: usize },

    /// A verification suite found a counterexample to the claim it checks.
    #[error("verification mismatch: {0}")]
    VerificationMismatch(String),

    #[error("bad input: {0}")]
    BadInput(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::BadInput(e.to_string())
    }
}
