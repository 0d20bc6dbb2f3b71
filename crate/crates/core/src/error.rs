use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chromaticity (x={x}, y={y}, Y={luminance})")]
    InvalidChromaticity { x: f64, y: f64, luminance: f64 },

    #[error("degenerate tristimulus value (X={x}, Y={y}, Z={z}): X+Y+Z must be positive")]
    DegenerateTristimulus { x: f64, y: f64, z: f64 },

    #[error("reference white must be positive (X={x}, Y={y}, Z={z})")]
    InvalidWhite { x: f64, y: f64, z: f64 },

    #[error("singular matrix: {0}")]
    SingularMatrix(&'static str),

    #[error("{source_name}: line {line}: {message}")]
    Parse {
        source_name: String,
        line: u64,
        message: String,
    },

    #[error("{source_name}: line {line}: invalid chromaticity in field `{field}` ({message})")]
    InvalidMeasurement {
        source_name: String,
        line: u64,
        field: String,
        message: String,
    },

    #[error("{source_name}: line {line}: hours {hours} does not strictly increase (previous {previous})")]
    NonIncreasingHours {
        source_name: String,
        line: u64,
        hours: f64,
        previous: f64,
    },

    #[error("{source_name}: unknown aging condition `{value}` at line {line}")]
    UnknownCondition {
        source_name: String,
        line: u64,
        value: String,
    },

    #[error("{0}")]
    Schema(String),

    #[error("measurement series needs at least 2 records, found {0}")]
    TooFewRecords(usize),

    #[error("invalid decay curve: {0}")]
    InvalidDecayCurve(String),

    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: u32,
        left_height: u32,
        right_width: u32,
        right_height: u32,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("degenerate statistical test: {0}")]
    DegenerateTest(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("unsupported image {path}: {message}")]
    UnsupportedImage { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid DEM1 data: {0}")]
    DeltaEFormat(String),
}
