use thiserror::Error;

/// Errors raised by the toolkit's numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("deformation parameter must be finite and positive, got {0}")]
    InvalidHbar(f64),

    #[error("deformation parameter {found} does not equal 2π/{n} = {expected}")]
    HbarMismatch { n: usize, expected: f64, found: f64 },

    #[error("torus grid {rows}x{cols} is too small for band limit {band_limit} (need at least {needed} per axis)")]
    TorusGridTooSmall {
        rows: usize,
        cols: usize,
        band_limit: u32,
        needed: usize,
    },

    #[error("invalid spacetime grid: {0}")]
    InvalidGrid(String),

    #[error("axis {axis} has {len} samples; the stencil needs at least {needed}")]
    GridTooSmall { axis: usize, len: usize, needed: usize },

    #[error("grid holds {values} values but has {points} points")]
    GridShapeMismatch { points: usize, values: usize },

    #[error("sine basis is rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("series truncation order must be at least 2, got {0}")]
    TruncationTooSmall(usize),

    #[error("singular Kähler metric at (w, z, w̃, z̃) = {point:?}: {reason}")]
    SingularMetric { point: [f64; 4], reason: String },

    #[error("degenerate heavenly metric at (w, z, p, q) = {point:?}: {reason}")]
    DegenerateMetric { point: [f64; 4], reason: String },

    #[error("tetrad is singular at (w, z, p, q) = {point:?}")]
    SingularFrame { point: [f64; 4] },

    #[error("connection extraction system is singular at (w, z, p, q) = {point:?}")]
    SingularExtraction { point: [f64; 4] },

    #[error("point (w, z, p, q) = {point:?} lies within {margin} of a pp-wave branch point")]
    BranchPoint { point: [f64; 4], margin: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed field data: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
