use thiserror::Error;

use crate::contact::LagrangianKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("kind {kind} does not live in dimension {n}")]
    DimensionMismatch { kind: LagrangianKind, n: u32 },

    #[error("operation not defined for {kind}")]
    UnsupportedKind { kind: LagrangianKind },

    #[error("no non-negative solution of the dimension equation for {0}")]
    NegativeDimension(String),

    #[error("prescribed orbits are not allowed on a torus")]
    TorusPrescribedOrbit,

    #[error("smooth genus is only defined for surfaces")]
    NotASurface,

    #[error("degree must be positive")]
    ZeroDegree,

    #[error("unknown relative invariant {0}")]
    UnknownInvariant(String),

    #[error("negative point count for {0}")]
    NegativePointCount(String),

    #[error("recursion engine only handles a <= 2, got {0}")]
    RecursionOutOfScope(String),

    #[error("unresolvable F-invariant {0}")]
    UnresolvableFKey(String),

    #[error("R2 needs a free contact, {0} has none")]
    EmptyBeta(String),

    #[error("R1 needs at least two real points, {0} has fewer")]
    InsufficientRealPoints(String),

    #[error("inadmissible (d, r) = ({d}, {r}) for {what}")]
    InadmissiblePair { what: String, d: u32, r: u32 },

    #[error("{source_err} (while evaluating tree {tree})")]
    InTree { tree: String, source_err: Box<Error> },

    #[error("table error: {0}")]
    Table(String),
}

impl Error {
    /// True for the two "missing data" failures the CLI maps to exit code 3.
    pub fn is_missing_key(&self) -> bool {
        match self {
            Error::UnknownInvariant(_) | Error::UnresolvableFKey(_) => true,
            Error::InTree { source_err, .. } => source_err.is_missing_key(),
            _ => false,
        }
    }

    pub fn root_cause(&self) -> &Error {
        match self {
            Error::InTree { source_err, .. } => source_err.root_cause(),
            e => e,
        }
    }
}
