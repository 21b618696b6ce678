use crate::lattice::LatticePoint;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("linear part has determinant {0}, expected 1")]
    NotUnimodular(i64),

    #[error("{0} is not a lattice point of the polygon")]
    PointNotInPolygon(LatticePoint),

    #[error("point index {index} out of range (polygon has {len} lattice points)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("polygon has {0} lattice points, more than the supported 128")]
    TooManyPoints(usize),

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("algorithm failure: {0}")]
    AlgorithmFailure(String),

    #[error("polygon is not smooth: vertex {0} has a non-unimodular cone")]
    NotSmooth(LatticePoint),

    #[error("polygon is not in the secant catalog: {0}")]
    NotInCatalog(String),

    #[error("not decidable: {0}")]
    NotDecidable(String),

    #[error("polygons do not match")]
    PolygonMismatch,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
