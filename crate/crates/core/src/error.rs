use thiserror::Error;

use crate::hypergraph::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("hypergraph has no hyperedges")]
    EmptyHypergraph,
    #[error("unknown hyperedge `{0}`")]
    UnknownHyperedge(String),
    #[error("invalid hypergraph: {}", summarize(.0))]
    InvalidHypergraph(Vec<Violation>),
    #[error("hyperedge `{id}` spans {size} nodes, more than the supported {max}")]
    HyperedgeTooLarge { id: String, size: usize, max: usize },

    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("not a closed polygon: {0}")]
    NotAPolygon(String),
    #[error("required cell {0} is missing from the complex")]
    MissingCell(String),
    #[error("cell {0} has a non-positive or non-finite weight")]
    UnweightedComplex(String),

    #[error("edge lengths ({0}, {1}, {2}) violate the triangle inequality")]
    TriangleInequalityViolated(f64, f64, f64),
    #[error("spherical edge lengths ({0}, {1}, {2}) exceed the admissible range")]
    SphericalRangeExceeded(f64, f64, f64),
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    AsymmetricInput(usize, usize),
    #[error("distance matrix has a nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("distance matrix is not square")]
    NotSquare,
    #[error("distances do not describe a realizable simplex (squared volume {0})")]
    NonRealizableSimplex(f64),
    #[error("weights must be strictly positive, got {0}")]
    NonpositiveWeight(f64),
    #[error("no finite metric length between {0} and {1}")]
    MissingMetric(String, String),
    #[error("{0} is not an edge-combination weight scheme")]
    UnsupportedScheme(String),
    #[error("cell {0} receives a degenerate weight {1}")]
    DegenerateCell(String, f64),

    #[error("empty input")]
    EmptyInput,

    #[error("dual graphs need k >= 1, got {0}")]
    InvalidDualDimension(usize),
    #[error("complex has no cells of dimension {0}")]
    NoCellsAtDimension(usize),
    #[error("barycenter edge weights need an embedding")]
    MissingEmbedding,
    #[error("dual node {0} has no neighbors and idleness is zero")]
    IsolatedNode(String),
    #[error("idleness must lie in [0, 1), got {0}")]
    InvalidIdleness(f64),
    #[error("measure masses must be non-negative and sum to one (sum {0})")]
    InvalidMeasure(f64),
    #[error("infinite distance between support nodes {0} and {1}")]
    InfiniteDistanceInSupport(usize, usize),
    #[error("unknown dual edge {0}")]
    UnknownDualEdge(usize),

    #[error("cell {0} is not a simplex")]
    NonSimplicialCell(String),
    #[error("vertex `{0}` has no coordinates")]
    UnmappedVertex(String),
    #[error("vertex `{0}` has {1} coordinates, expected {2}")]
    CoordinateDimension(String, usize, usize),

    #[error("malformed input at line {line}, column {column}: {message}")]
    MalformedInput {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn summarize(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::MalformedInput {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
