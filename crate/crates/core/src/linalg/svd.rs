use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::eigen::jacobi_rotation;
use super::{CMatrix, C64, RANK_TOL};

const MAX_SWEEPS: usize = 80;

/// Compact SVD `A = U1 diag(sigma) V1^H` keeping only the numerically nonzero
/// singular values (descending).
#[derive(Clone, Debug)]
pub struct CompactSvd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl CompactSvd {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        CMatrix::from_fn(m, n, |i, j| {
            self.sigma
                .iter()
                .enumerate()
                .map(|(k, &s)| self.u[(i, k)] * self.v[(j, k)].conj() * s)
                .sum()
        })
    }
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns are orthogonalized pairwise by unitary plane rotations; singular
/// values are the final column norms. Matrices with more columns than rows
/// are handled through their adjoint.
pub fn compact_svd(a: &CMatrix) -> CompactSvd {
    if a.rows() < a.cols() {
        let t = compact_svd(&a.adjoint());
        return CompactSvd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = CMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for k in 0..m {
                    let wi = w[(k, i)];
                    let wj = w[(k, j)];
                    alpha += wi.norm_sqr();
                    beta += wj.norm_sqr();
                    gamma += wi.conj() * wj;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let ph = (gamma / g).conj();
                let (c, s) = jacobi_rotation(alpha, beta, g);
                for k in 0..m {
                    let wi = w[(k, i)];
                    let wj = w[(k, j)];
                    w[(k, i)] = wi * c - wj * ph * s;
                    w[(k, j)] = wi * s + wj * ph * c;
                }
                for k in 0..n {
                    let vi = v[(k, i)];
                    let vj = v[(k, j)];
                    v[(k, i)] = vi * c - vj * ph * s;
                    v[(k, j)] = vi * s + vj * ph * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|k| w[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma_max = order.first().map(|&i| norms[i]).unwrap_or(0.0);
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&i| norms[i] > 0.0 && norms[i] > RANK_TOL * sigma_max)
        .collect();

    let r = kept.len();
    let u = CMatrix::from_fn(m, r, |row, k| w[(row, kept[k])] / norms[kept[k]]);
    let vk = CMatrix::from_fn(n, r, |row, k| v[(row, kept[k])]);
    CompactSvd {
        u,
        sigma: kept.iter().map(|&i| norms[i]).collect(),
        v: vk,
    }
}

/// Moore-Penrose pseudoinverse `V1 diag(sigma)^-1 U1^H`.
pub fn pseudo_inverse(a: &CMatrix) -> CMatrix {
    let svd = compact_svd(a);
    let (m, n) = a.shape();
    CMatrix::from_fn(n, m, |i, j| {
        svd.sigma
            .iter()
            .enumerate()
            .map(|(k, &s)| svd.v[(i, k)] * svd.u[(j, k)].conj() / s)
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{complex_gaussian_matrix, test_rng};
    use alloc::vec;

    fn rel_err(a: &CMatrix, b: &CMatrix) -> f64 {
        a.max_abs_diff(b) / b.max_abs().max(1e-300)
    }

    #[test]
    fn identity_has_full_rank() {
        let s = compact_svd(&CMatrix::identity(3));
        assert_eq!(s.rank(), 3);
        for x in &s.sigma {
            assert!((x - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let s = compact_svd(&CMatrix::zeros(3, 2));
        assert_eq!(s.rank(), 0);
        assert_eq!(s.u.shape(), (3, 0));
        assert_eq!(s.v.shape(), (2, 0));
        assert_eq!(pseudo_inverse(&CMatrix::zeros(3, 2)), CMatrix::zeros(2, 3));
    }

    #[test]
    fn rank_one_outer_product() {
        let mut rng = test_rng(3);
        let u = complex_gaussian_matrix(&mut rng, 4, 1, 1.0);
        let v = complex_gaussian_matrix(&mut rng, 3, 1, 1.0);
        let u = u.scale(1.0 / u.frobenius_norm());
        let v = v.scale(1.0 / v.frobenius_norm());
        let a = u.matmul(&v.adjoint()).unwrap();
        let s = compact_svd(&a);
        assert_eq!(s.rank(), 1);
        assert!((s.sigma[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_rectangular_round_trip() {
        let mut rng = test_rng(4);
        for &(m, n) in &[(4, 2), (2, 4), (5, 5), (8, 3), (1, 6)] {
            let a = complex_gaussian_matrix(&mut rng, m, n, 1.0);
            let s = compact_svd(&a);
            assert_eq!(s.rank(), m.min(n));
            assert!(rel_err(&s.reconstruct(), &a) < 1e-12);
            let uu = s.u.adjoint_mul(&s.u).unwrap();
            let vv = s.v.adjoint_mul(&s.v).unwrap();
            assert!(uu.max_abs_diff(&CMatrix::identity(s.rank())) < 1e-12);
            assert!(vv.max_abs_diff(&CMatrix::identity(s.rank())) < 1e-12);
        }
    }

    #[test]
    fn pinv_of_invertible_is_inverse() {
        let a = CMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(2.0, 1.0),
                C64::new(0.0, 1.0),
                C64::new(1.0, 0.0),
                C64::new(3.0, -1.0),
            ],
        )
        .unwrap();
        let p = pseudo_inverse(&a);
        assert!(a.matmul(&p).unwrap().max_abs_diff(&CMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn pinv_of_singular_diagonal() {
        let p = pseudo_inverse(&CMatrix::from_real_diag(&[2.0, 0.0]));
        assert!(p.max_abs_diff(&CMatrix::from_real_diag(&[0.5, 0.0])) < 1e-15);
    }

    #[test]
    fn pinv_right_inverse_for_full_row_rank() {
        let mut rng = test_rng(8);
        let a = complex_gaussian_matrix(&mut rng, 2, 4, 1.0);
        let p = pseudo_inverse(&a);
        assert!(a.matmul(&p).unwrap().max_abs_diff(&CMatrix::identity(2)) < 1e-8);
    }
}
