use alloc::vec::Vec;

use super::BrError;
use crate::linalg::{water_level, CMatrix, Hermitian};

#[derive(Clone, Debug, PartialEq)]
pub struct Waterfill {
    pub covariance: Hermitian,
    /// Water level `mu`.
    pub level: f64,
    /// Power `(mu - 1/d_k)^+` on each mode.
    pub powers: Vec<f64>,
}

/// `U diag((mu - 1/d_k)^+) U^H` with `mu` chosen so the trace equals `p`.
///
/// `u` holds one column per gain in `d`.
pub fn waterfill(u: &CMatrix, d: &[f64], p: f64) -> Result<Waterfill, BrError> {
    if !(p >= 0.0 && p.is_finite()) {
        return Err(BrError::InvalidInput("power must be finite and non-negative"));
    }
    if d.is_empty() || d.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(BrError::InvalidInput("gains must be positive and finite"));
    }
    if u.cols() != d.len() {
        return Err(BrError::InvalidInput("one eigenvector per gain required"));
    }
    let floors: Vec<f64> = d.iter().map(|&x| 1.0 / x).collect();
    let level = water_level(&floors, p);
    let powers: Vec<f64> = if p == 0.0 {
        alloc::vec![0.0; d.len()]
    } else {
        floors.iter().map(|&f| (level - f).max(0.0)).collect()
    };
    Ok(Waterfill {
        covariance: Hermitian::from_eigen(u, &powers),
        level,
        powers,
    })
}
