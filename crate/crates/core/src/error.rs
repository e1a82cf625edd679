use thiserror::Error;

/// Errors raised by space construction, the magnitude engine and the
/// approximation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("negative or NaN distance {value} at ({a}, {b})")]
    NegativeDistance { a: usize, b: usize, value: f64 },
    #[error("nonzero self-distance {value} at point {a}")]
    NonzeroDiagonal { a: usize, value: f64 },
    #[error("distinct points {a} and {b} at distance zero")]
    ZeroOffDiagonal { a: usize, b: usize },
    #[error("d({a},{b}) differs from d({b},{a}) in a non-generalized space")]
    AsymmetricDistance { a: usize, b: usize },
    #[error("triangle inequality fails: d({a},{c}) > d({a},{b}) + d({b},{c})")]
    TriangleViolation { a: usize, b: usize, c: usize },
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("unknown vertex or element {0:?}")]
    UnknownLabel(String),
    #[error("edge length {0} is not positive")]
    NonpositiveLength(f64),
    #[error("order relation contains a cycle through {0:?}")]
    CycleDetected(String),
    #[error("scale factor {0} is not positive")]
    NonpositiveScale(f64),
    #[error("gluing distance {distance} is below half the larger diameter {required}")]
    GlueDistanceTooSmall { distance: f64, required: f64 },
    #[error("operation requires a symmetric space")]
    AsymmetricSpace,
    #[error("similarity matrix is singular (rcond {rcond:e})")]
    SingularSimilarity { rcond: f64 },
    #[error("space is not scattered")]
    NotScattered,
    #[error("alternating series did not converge within {0} terms")]
    SeriesNotConverged(usize),
    #[error("space is not homogeneous")]
    NotHomogeneous,
    #[error("space is not ultrametric")]
    NotUltrametric,
    #[error("space is not positive definite")]
    NotPositiveDefinite,
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("code enumeration would visit {0} codewords")]
    EnumerationTooLarge(u128),
    #[error("field size {0} is not a supported prime")]
    UnsupportedField(u64),
    #[error("projection condition fails")]
    ProjectionFails,
    #[error("magnitude of a constituent space is undefined")]
    SubmagnitudeUndefined,
    #[error("gluing is resonant: |A||B| = e^(2D)")]
    ResonantGlue,
    #[error("scale grid is empty or contains a nonpositive value")]
    EmptyGrid,
    #[error("growth fit needs {needed} defined samples spanning a decade, found {found}")]
    InsufficientSamples { needed: usize, found: usize },
    #[error("negative length {0}")]
    NegativeLength(f64),
    #[error("negative side {0}")]
    NegativeSide(f64),
    #[error("resolutions must be positive, descending and nested by integer ratios")]
    NonNestedResolutions,
    #[error("malformed region: {0}")]
    MalformedRegion(String),
    #[error("grid would contain {points} points (cap {cap})")]
    GridTooLarge { points: usize, cap: usize },
    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),
    #[error("unsupported shape for this norm: {0}")]
    UnsupportedShape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
