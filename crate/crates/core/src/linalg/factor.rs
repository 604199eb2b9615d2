use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{CMatrix, Hermitian, LinalgError, C64};

/// Cholesky factor `A = L L^H` of a Hermitian positive definite matrix.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: CMatrix,
}

impl Cholesky {
    pub fn new(a: &Hermitian) -> Result<Self, LinalgError> {
        let n = a.dim();
        let mut l = CMatrix::zeros(n, n);
        let scale = (0..n).map(|i| a[(i, i)].re.abs()).fold(0.0, f64::max);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 1e-14 * scale) {
                return Err(LinalgError::NotPositiveDefinite);
            }
            let djj = d.sqrt();
            l[(j, j)] = C64::new(djj, 0.0);
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Self { l })
    }

    pub fn factor(&self) -> &CMatrix {
        &self.l
    }

    /// Solves `L X = B`.
    pub fn solve_lower(&self, b: &CMatrix) -> Result<CMatrix, LinalgError> {
        let n = self.l.rows();
        if b.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                left: self.l.shape(),
                right: b.shape(),
            });
        }
        let mut x = b.clone();
        for c in 0..b.cols() {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.l[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.l[(i, i)];
            }
        }
        Ok(x)
    }

    /// Solves `L^H X = B`.
    pub fn solve_upper_adjoint(&self, b: &CMatrix) -> Result<CMatrix, LinalgError> {
        let n = self.l.rows();
        if b.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                left: self.l.shape(),
                right: b.shape(),
            });
        }
        let mut x = b.clone();
        for c in 0..b.cols() {
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in (i + 1)..n {
                    s -= self.l[(k, i)].conj() * x[(k, c)];
                }
                x[(i, c)] = s / self.l[(i, i)];
            }
        }
        Ok(x)
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix, LinalgError> {
        self.solve_upper_adjoint(&self.solve_lower(b)?)
    }

    pub fn inverse(&self) -> Hermitian {
        let n = self.l.rows();
        let inv = self
            .solve(&CMatrix::identity(n))
            .expect("identity has matching dimension");
        Hermitian::symmetrize(inv)
    }

    /// `ln det A = 2 * sum ln L_ii`.
    pub fn log_det(&self) -> f64 {
        (0..self.l.rows()).map(|i| self.l[(i, i)].re.ln()).sum::<f64>() * 2.0
    }
}

/// LU factorization with partial pivoting of a general square matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        if scale == 0.0 && n > 0 {
            return Err(LinalgError::Singular);
        }
        for k in 0..n {
            let (piv, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= 1e-14 * scale {
                return Err(LinalgError::Singular);
            }
            if piv != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
                perm.swap(k, piv);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix, LinalgError> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                left: self.lu.shape(),
                right: b.shape(),
            });
        }
        let mut x = CMatrix::from_fn(n, b.cols(), |i, j| b[(self.perm[i], j)]);
        for c in 0..b.cols() {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in (i + 1)..n {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> CMatrix {
        self.solve(&CMatrix::identity(self.lu.rows()))
            .expect("identity has matching dimension")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{complex_gaussian_matrix, random_psd, test_rng};

    #[test]
    fn cholesky_solves_and_inverts() {
        let mut rng = test_rng(21);
        for n in 1..=6 {
            let a = random_psd(&mut rng, n).add_h(&Hermitian::identity(n));
            let ch = Cholesky::new(&a).unwrap();
            let l = ch.factor();
            assert!((l * &l.adjoint()).max_abs_diff(&a) < 1e-12);
            let inv = ch.inverse();
            assert!((inv.as_matrix() * a.as_matrix()).max_abs_diff(&CMatrix::identity(n)) < 1e-10);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Hermitian::from_real_diag(&[1.0, -1.0]);
        assert_eq!(Cholesky::new(&a).unwrap_err(), LinalgError::NotPositiveDefinite);
        assert!(Cholesky::new(&Hermitian::zeros(2)).is_err());
    }

    #[test]
    fn log_det_matches_product_of_diagonal() {
        let a = Hermitian::from_real_diag(&[2.0, 3.0, 0.5]);
        let ld = Cholesky::new(&a).unwrap().log_det();
        assert!((ld - 3.0_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn lu_inverse_of_random_matrix() {
        let mut rng = test_rng(2);
        for n in 1..=6 {
            let a = complex_gaussian_matrix(&mut rng, n, n, 1.0);
            let inv = Lu::new(&a).unwrap().inverse();
            assert!((&a * &inv).max_abs_diff(&CMatrix::identity(n)) < 1e-10);
        }
    }

    #[test]
    fn lu_rejects_singular() {
        let a = CMatrix::from_real_diag(&[1.0, 0.0]);
        assert_eq!(Lu::new(&a).unwrap_err(), LinalgError::Singular);
    }
}
