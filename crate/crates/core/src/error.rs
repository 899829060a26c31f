use thiserror::Error;

use crate::krylov::GmresHistory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("QR iteration failed to converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("least-squares matrix is rank deficient (|r_jj| = {pivot:e})")]
    RankDeficient { pivot: f64 },

    #[error("initial vector is zero")]
    ZeroInitialVector,

    #[error("GMRES reached {iterations} iterations without meeting the tolerance")]
    MaxIterationsReached {
        iterations: usize,
        history: Box<GmresHistory>,
    },

    #[error("H_k is numerically singular at step {step}")]
    SingularHk { step: usize },

    #[error("requested step {requested} but only {available} Arnoldi steps are available")]
    StepOutOfRange { requested: usize, available: usize },

    #[error("matrix is numerically singular")]
    SingularMatrix,

    #[error("partition group boundary splits an eigenvalue cluster near {0}")]
    ClusterSplit(String),

    #[error("partition is invalid: {0}")]
    InvalidPartition(String),

    #[error("eigenvalues are repeated; per-eigenvalue conditioning is not defined")]
    RepeatedEigenvalues,

    #[error("interval [{a}, {b}] contains the origin")]
    IntervalContainsOrigin { a: f64, b: f64 },

    #[error(
        "resolvent bound violated on curve {curve}: min s_min = {observed:e} < eps = {epsilon:e}"
    )]
    ResolventBoundViolated {
        curve: usize,
        epsilon: f64,
        observed: f64,
    },

    #[error("level {level:e} is outside the grid range [{min:e}, {max:e}]")]
    LevelOutOfRange { level: f64, min: f64, max: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown gallery entry `{0}`")]
    UnknownEntry(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
