//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("simplex is numerically singular (vertices not in general position)")]
    SingularSimplex,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("interval endpoints must satisfy a < b, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("base configuration needs at least 2 points, got {got}")]
    TooFewBasePoints { got: usize },

    #[error("base abscissas must be strictly increasing (violated at index {index})")]
    BasePointsNotIncreasing { index: usize },

    #[error("xs and ys lengths differ: {xs} vs {ys}")]
    LengthMismatch { xs: usize, ys: usize },

    #[error("empty input: at least one sample is required")]
    EmptyInput,

    #[error("function consistency violated at x = {x}: found y = {y1} and y = {y2}")]
    FunctionConsistency { x: f64, y1: f64, y2: f64 },

    #[error("non-finite sample coordinate at index {index}")]
    NonFiniteSample { index: usize },

    #[error("degenerate barcode: total bar length is zero")]
    DegenerateBarcode,

    #[error("sample x = {x} lies outside the base domain [{a}, {b}]")]
    SampleOutOfDomain { x: f64, a: f64, b: f64 },

    #[error("point clouds do not share abscissas (mismatch at index {index})")]
    CloudMismatch { index: usize },

    #[error("loss kind {kind} is not {expected}")]
    LossKindMismatch {
        kind: &'static str,
        expected: &'static str,
    },

    #[error("min gap {min_gap} is infeasible for {points} points on a span of {span}")]
    InfeasibleMinGap {
        min_gap: f64,
        points: usize,
        span: f64,
    },

    #[error("at least one of train_x / train_y must be enabled")]
    NothingTrainable,

    #[error("invalid training parameter: {0}")]
    InvalidTrainParameter(&'static str),

    #[error("no losses requested")]
    NoLosses,

    #[error("csv: line {line}: {message}")]
    CsvParse { line: usize, message: String },

    #[error("csv: missing column {name:?}")]
    CsvMissingColumn { name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
