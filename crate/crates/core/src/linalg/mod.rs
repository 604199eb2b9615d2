//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are small (a few antennas per player, a few players), so every
//! kernel here is a straightforward dense routine: cyclic Jacobi for Hermitian
//! eigenproblems, one-sided Jacobi for the SVD, Cholesky and partially pivoted
//! LU for solves.

mod eigen;
mod factor;
mod matrix;
mod perron;
mod projection;
mod realify;
mod svd;

pub use eigen::{hermitian_evd, HermitianEigen};
pub use factor::{Cholesky, Lu};
pub use matrix::{CMatrix, Hermitian, RealMatrix, C64};
pub use perron::{spectral_radius, PerronResult, W_FLOOR};
pub use projection::{psd_trace_projection, water_level};
pub use realify::{complexify, realify};
pub use svd::{compact_svd, pseudo_inverse, CompactSvd};

use thiserror::Error;

/// Relative tolerance used when accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Singular values below `RANK_TOL * sigma_max` are treated as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Absolute tolerance of the water-level bisection.
pub const WATER_LEVEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix has {len} entries, expected {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is numerically singular")]
    Singular,
    #[error("power budget must be finite and non-negative, got {0}")]
    NegativePower(f64),
    #[error("real matrix does not have the [[a,-b],[b,a]] block structure")]
    NotRealified,
    #[error("matrix has a negative entry")]
    NegativeEntry,
}
