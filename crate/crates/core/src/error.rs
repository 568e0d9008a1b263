use thiserror::Error;

use crate::boundary::{DataTrace, Side};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("block count must be even and at least {min}, got {got}")]
    InvalidBlockCount { got: usize, min: usize },

    #[error("domain length must be positive and finite, got {0}")]
    InvalidLength(f64),

    #[error("grid kind {grid} does not match boundary condition {bc}")]
    GridMismatch { grid: &'static str, bc: &'static str },

    #[error("grid with {points} points is too small for the {stencil} stencil")]
    GridTooSmall { points: usize, stencil: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("boundary data is missing {trace:?} at the {side:?} endpoint")]
    MissingBoundaryTrace { side: Side, trace: DataTrace },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("polynomial degree {0} exceeds the supported maximum of 5")]
    DegreeTooHigh(usize),

    #[error(
        "numerical instability: non-finite state at t = {t} (c = {c}, N = {n}, dt = {dt})"
    )]
    Instability { c: f64, n: usize, dt: f64, t: f64 },

    #[error("non-finite value produced by a time step ending at t = {t}")]
    NonFinite { t: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
