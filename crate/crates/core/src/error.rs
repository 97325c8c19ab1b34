use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

/// Why a family of relations failed to form an association scheme.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeViolation {
    #[error("no relations given")]
    Empty,
    #[error("relation {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("relation {index} has a non 0/1 entry at ({row}, {col})")]
    NotBinary { index: usize, row: usize, col: usize },
    #[error("relation 0 is not the identity relation")]
    FirstNotIdentity,
    #[error("relation {index} is empty")]
    EmptyRelation { index: usize },
    #[error("pair ({row}, {col}) is covered by {count} relations, expected exactly one")]
    NotPartition { row: usize, col: usize, count: usize },
    #[error("p^{k}_{{{i}{j}}} is not constant over relation {k}: {first} at one pair, {other} at ({row}, {col})")]
    IntersectionNotConstant {
        i: usize,
        j: usize,
        k: usize,
        first: u64,
        other: u64,
        row: usize,
        col: usize,
    },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("capacity exceeded: {requested} matrix entries requested, limit is {limit}")]
    CapacityExceeded { requested: u128, limit: u128 },

    #[error("invalid Hamming parameters d={d}, n={n} (need d >= 1, n >= 2)")]
    InvalidHamming { d: usize, n: usize },

    #[error("distance {k} out of range 0..={d}")]
    DistanceOutOfRange { k: usize, d: usize },

    #[error("vertex index {index} out of range for {count} vertices")]
    VertexOutOfRange { index: usize, count: usize },

    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("not a valid adjacency matrix: {0}")]
    NotAdjacency(String),

    #[error("coupling g = {0} must be finite and non-negative")]
    InvalidCoupling(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("{quantity} = {value} is outside its domain ({requirement})")]
    Domain {
        quantity: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not an association scheme: {0}")]
    NotAssociationScheme(SchemeViolation),

    #[error("{family} closed form is undefined for this parity: {detail}")]
    ParityUndefined { family: &'static str, detail: String },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("chain elimination hit a non-positive pivot {pivot:e} at depth {depth}")]
    SingularChain { depth: usize, pivot: f64 },

    #[error("correlation parameter {gamma} reached the unit bound; state not normalizable at working precision")]
    NumericalDegeneracy { gamma: f64 },

    #[error("scan over {vertices} vertices exceeds the limit of {limit}")]
    ScanLimit { vertices: usize, limit: usize },

    #[error("partition {part:?} (1-based): {cause}")]
    AtPartition { part: Vec<usize>, cause: Box<Error> },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures of floating-point conditioning rather than bad input.
    pub fn is_numerical(&self) -> bool {
        if let Error::AtPartition { cause, .. } = self {
            return cause.is_numerical();
        }
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::SingularChain { .. }
                | Error::NumericalDegeneracy { .. }
                | Error::Internal(_)
        )
    }
}

impl From<SchemeViolation> for Error {
    fn from(v: SchemeViolation) -> Self {
        Error::NotAssociationScheme(v)
    }
}

pub type Result<T> = core::result::Result<T, Error>;
