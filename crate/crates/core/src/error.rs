//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("degree cap exceeded: requested |m| = {requested}, cap = {cap}")]
    CapExceeded { requested: i64, cap: u32 },

    #[error("evaluation point is within {distance:.3e} of a pole")]
    NearPole { distance: f64 },

    #[error("point is on or too close to the branch cut {0}")]
    BranchCut(&'static str),

    #[error("degenerate elliptic curve: roots {0} and {1} collide (gap {2:.3e})")]
    Degenerate(&'static str, &'static str, f64),

    #[error("iteration failed to converge: {0}")]
    NonConvergence(String),

    #[error("quadrature did not reach the requested tolerance (err {err:.3e} > tol {tol:.3e})")]
    QuadratureTolerance { err: f64, tol: f64 },

    #[error("level-curve tracer stalled: {0}")]
    TracerStall(String),

    #[error("point {0} lies outside the gridded region")]
    OutsideRegion(String),

    #[error("grid cache format error: {0}")]
    CacheFormat(String),

    #[error("grid cache version mismatch: file {found}, expected {expected}")]
    CacheVersion { found: String, expected: String },

    #[error("grid cache failed anchor validation: {0}")]
    CacheCorrupt(String),

    #[error("unknown figure id {id:?}; valid ids: {valid}")]
    UnknownFigure { id: String, valid: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("{0}")]
    Invalid(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
