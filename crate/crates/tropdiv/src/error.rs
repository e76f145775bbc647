//! Crate-wide error type.

/// Errors shared by every module of the crate.
///
/// The variants mirror the failure modes of the public operations: structural
/// preconditions (`DisconnectedGraph`, `NotASpanningTree`), mismatched inputs
/// (`GraphMismatch`, `LatticeMismatch`), domain violations of individual
/// operations, and I/O or parsing problems.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("inputs live on different graphs")]
    GraphMismatch,
    #[error("eps too large: {0}")]
    EpsTooLarge(String),
    #[error("divisor is not effective away from the base point {0}")]
    NotEffectiveAwayFromQ(String),
    #[error("edge set is not a spanning tree")]
    NotASpanningTree,
    #[error("torus points use different period lattices")]
    LatticeMismatch,
    #[error("divisor support touches a vertex")]
    UnsupportedSupport,
    #[error("divisor must have degree zero")]
    DegreeNonZero,
    #[error("divisor is not in the kernel of the norm map")]
    NotPrym,
    #[error("divisor is not anti-symmetric")]
    NotAntiSymmetric,
    #[error("divisor has the wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: i64, got: i64 },
    #[error("representative is not generic: {0}")]
    GenericityFailure(String),
    #[error("double cover is disconnected")]
    DisconnectedCover,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
