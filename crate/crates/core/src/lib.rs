//! Spectral theory of the curl and gradient-of-divergence operators on a ball.
//!
//! The library builds the explicit eigenfields of `rot u = λu` (Beltrami /
//! force-free fields) and `-∇div q = ν²q` on the ball `|x| < R` with zero
//! normal boundary trace, decomposes square-integrable vector fields into
//! their potential and solenoidal parts in that combined orthonormal basis,
//! and solves `rot u + λu = f` and `∇div u + λu = f` by series, including
//! the resonant (Fredholm) case.

pub mod ballquad;
pub mod eigenbasis;
pub mod fdcheck;
pub mod fieldio;
pub mod geometry;
pub mod solver;
pub mod specfun;
pub mod spectral;
pub mod trace;

use eigenbasis::ModeIndex;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("search ceiling {ceiling:.3} too small to isolate {requested} zeros for n = {n}")]
    SearchCeiling {
        n: u32,
        requested: usize,
        ceiling: f64,
    },
    #[error("invalid mode index: {0}")]
    InvalidIndex(String),
    #[error("{path}:{line}: {msg}")]
    Malformed {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("point ({x}, {y}, {z}) lies outside the ball of radius {radius}")]
    OutsideBall {
        x: f64,
        y: f64,
        z: f64,
        radius: f64,
    },
    #[error("lambda = 0 is outside the resolvent's range (the homogeneous problem has an infinite-dimensional kernel)")]
    LambdaZero,
    #[error("incompatible right-hand side at resonance lambda = {lambda}: max blocked coefficient {residual:.3e} on modes {modes:?}")]
    Incompatible {
        lambda: f64,
        residual: f64,
        modes: Vec<ModeIndex>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
