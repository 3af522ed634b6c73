use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// The first broken invariant found while validating a distance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    NotSquare { len: usize, n: usize },
    NonFinite { i: usize, j: usize },
    Negative { i: usize, j: usize, value: f64 },
    NonzeroDiagonal { i: usize, value: f64 },
    Asymmetric { i: usize, j: usize },
    Triangle { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NotSquare { len, n } => {
                write!(f, "{len} entries cannot form a {n}x{n} matrix")
            }
            Violation::NonFinite { i, j } => write!(f, "non-finite distance at ({i},{j})"),
            Violation::Negative { i, j, value } => {
                write!(f, "negative distance {value} at ({i},{j})")
            }
            Violation::NonzeroDiagonal { i, value } => {
                write!(f, "nonzero diagonal entry {value} at ({i},{i})")
            }
            Violation::Asymmetric { i, j } => write!(f, "asymmetric distances at ({i},{j})"),
            Violation::Triangle { i, j, k } => write!(
                f,
                "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric: {0}")]
    InvalidMetric(Violation),

    #[error("the space has no points")]
    EmptySpace,

    #[error("scale must be positive and finite, got {0}")]
    NonPositiveScale(f64),

    #[error("order q must be a non-negative number or infinity, got {0} (negative orders are not supported)")]
    NegativeOrder(f64),

    #[error("weighted spread is only defined here for q in {{0, 2, inf}}, got q = {0}")]
    UnsupportedWeightedOrder(f64),

    #[error("graph is disconnected: no path from vertex {from} to vertex {to}")]
    Disconnected { from: usize, to: usize },

    #[error(
        "no weighting: similarity matrix is numerically singular (reciprocal condition {rcond:e})"
    )]
    NoWeighting { rcond: f64 },

    #[error("{what} supports at most {cap} points, got {n}")]
    UnsupportedSize {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero similarity mass at index {0} on the support of the distribution")]
    ZeroSimilarityOnSupport(usize),

    #[error("growth rate needs positive values, got f = {value} at t = {t}")]
    NonPositiveValue { t: f64, value: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub(crate) fn check_scale(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveScale(t))
    }
}
