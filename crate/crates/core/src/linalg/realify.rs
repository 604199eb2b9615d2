//! Embedding of `M x N` complex matrices into `2M x 2N` real matrices.
//!
//! Each entry `a + bj` becomes the block `[[a, -b], [b, a]]` (unit scaling).
//! The map is a ring homomorphism, so products, adjoints (as transposes) and
//! spectra carry over. Traces double and Frobenius norms scale by `sqrt(2)`.

use super::{CMatrix, LinalgError, RealMatrix, C64};

pub fn realify(z: &CMatrix) -> RealMatrix {
    let (m, n) = z.shape();
    let mut out = RealMatrix::zeros(2 * m, 2 * n);
    for i in 0..m {
        for j in 0..n {
            let w = z[(i, j)];
            out[(2 * i, 2 * j)] = w.re;
            out[(2 * i, 2 * j + 1)] = -w.im;
            out[(2 * i + 1, 2 * j)] = w.im;
            out[(2 * i + 1, 2 * j + 1)] = w.re;
        }
    }
    out
}

/// Inverse of [`realify`]. Rejects matrices whose 2x2 blocks deviate from the
/// `[[a, -b], [b, a]]` pattern by more than `1e-12` (relative to the largest entry).
pub fn complexify(r: &RealMatrix) -> Result<CMatrix, LinalgError> {
    if r.rows() % 2 != 0 || r.cols() % 2 != 0 {
        return Err(LinalgError::NotRealified);
    }
    let (m, n) = (r.rows() / 2, r.cols() / 2);
    let scale = r.as_slice().iter().fold(1.0_f64, |acc, x| acc.max(x.abs()));
    let tol = 1e-12 * scale;
    let mut out = CMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let a = r[(2 * i, 2 * j)];
            let nb = r[(2 * i, 2 * j + 1)];
            let b = r[(2 * i + 1, 2 * j)];
            let a2 = r[(2 * i + 1, 2 * j + 1)];
            if (a - a2).abs() > tol || (b + nb).abs() > tol {
                return Err(LinalgError::NotRealified);
            }
            out[(i, j)] = C64::new(a, b);
        }
    }
    Ok(out)
}
