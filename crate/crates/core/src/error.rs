use thiserror::Error;

/// Errors raised by geometric constructions and combinatorial checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point set is affinely dependent (rank {rank}, expected {expected})")]
    AffinelyDependent { rank: usize, expected: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("points span dimension {found}, expected {expected}")]
    DegenerateDimension { expected: usize, found: usize },

    #[error("points {0} and {1} coincide within tolerance")]
    DuplicatePoints(usize, usize),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("face dimension {k} out of range 0..{max}")]
    DimensionOutOfRange { k: usize, max: usize },

    #[error("unknown point index {0}")]
    UnknownIndex(usize),

    #[error("vertex set does not lie in any facet of the center polytope")]
    NotOnBoundary,

    #[error("ball intersection is empty")]
    EmptyIntersection,

    #[error("query point is equidistant from a whole intersection sphere")]
    DegenerateDirection,

    #[error("r-convexity test is not monotone in r (holds at {holds}, fails at {fails})")]
    NonMonotoneBracket { holds: f64, fails: f64 },

    #[error("instance is not a basic r-ball polyhedron")]
    NotBasic,

    #[error("circumradius {rho} is not below generating radius {r}")]
    RadiusTooSmall { rho: f64, r: f64 },

    #[error("center distance {w} outside the open range (0, 2r) for r = {r}")]
    DegeneratePair { w: f64, r: f64 },

    #[error("angle {0} outside the open range (0, pi)")]
    AngleOutOfRange(f64),

    #[error("moment curve parameters are not strictly increasing")]
    NonDistinctTaus,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("f-vector lists {found} facets, expected {expected}")]
    FacetCountMismatch { expected: usize, found: usize },

    #[error("point set is affinely degenerate; alignment is not unique")]
    RankDeficient,

    #[error("face {0:?} is not inscribed in a sphere")]
    NotInscribed(Vec<usize>),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
