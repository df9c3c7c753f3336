use thiserror::Error;

/// Errors produced by the space, complex, cover and system operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a topology: {0}")]
    NotATopology(String),

    #[error("not a T0 space: `{0}` and `{1}` have the same minimal open set")]
    NotT0(String, String),

    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),

    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("cycle detected in covering relation through `{0}`")]
    CycleDetected(String),

    #[error("{what}: size {actual} exceeds guard {limit}")]
    SizeGuardExceeded { what: &'static str, limit: usize, actual: usize },

    #[error("map is not order preserving: {0}")]
    NotContinuous(String),

    #[error("map shape mismatch: {0}")]
    MapMismatch(String),

    #[error("set is not open (not a down-set): {0}")]
    NotOpen(String),

    #[error("cover member is empty")]
    EmptyCoverMember,

    #[error("members do not cover the space; missing `{0}`")]
    NotACover(String),

    #[error("covers live on different spaces")]
    SpaceMismatch,

    #[error("cover does not refine the target cover: {0}")]
    NotRefinement(String),

    #[error("cover is not closed under non-empty intersections")]
    NotIntersectionClosed,

    #[error("cover is not basis-like: {0}")]
    NotBasisLike(String),

    #[error("projections have different endpoints")]
    EndpointMismatch,

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("torsion coefficient does not fit in 64 bits")]
    TorsionOverflow,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
