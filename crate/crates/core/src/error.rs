use thiserror::Error;

/// Errors produced anywhere in the geometry pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point has non-positive depth (z = {0})")]
    NonPositiveDepth(f64),
    #[error("camera height must be positive (got {0})")]
    NonPositiveHeight(f64),
    #[error("object dimensions must be positive")]
    NonPositiveDimension,
    #[error("implausible ground plane: |a| or |b| exceeds {limit} (a = {a}, b = {b})")]
    ImplausiblePlane { a: f64, b: f64, limit: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("empty input")]
    EmptyInput,
    #[error("image is {width}x{height}, at least {min}x{min} required")]
    ImageTooSmall { width: usize, height: usize, min: usize },
    #[error("pixel ({u}, {v}) does not lie strictly below the horizon line")]
    AboveHorizon { u: f64, v: f64 },
    #[error("expected {expected} contact points, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("front midpoint coincides with the bottom center")]
    DegenerateFront,
    #[error("contact point lies behind the camera (z = {0})")]
    BehindCamera(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}, field {field}: {message}")]
    Parse {
        line: usize,
        field: usize,
        message: String,
    },
    #[error("calibration has no P2 entry")]
    MissingP2,
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("image payload truncated: expected {expected} bytes, got {got}")]
    TruncatedPayload { expected: usize, got: usize },
    #[error("{0} unexpected bytes after image payload")]
    TrailingData(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
