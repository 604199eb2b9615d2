use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{CMatrix, Hermitian, C64};

const MAX_SWEEPS: usize = 60;

/// Eigendecomposition `A = U diag(values) U^H` with values sorted descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> Hermitian {
        Hermitian::from_eigen(&self.vectors, &self.values)
    }

    pub fn min_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Rotation parameters `(c, s)` zeroing the off-diagonal of the real symmetric
/// pencil `[[app, g], [g, aqq]]`, `g > 0`. The smaller root keeps `|theta| <= pi/4`.
pub(super) fn jacobi_rotation(app: f64, aqq: f64, g: f64) -> (f64, f64) {
    let zeta = (aqq - app) / (2.0 * g);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t)
}

/// Cyclic complex Jacobi eigenvalue algorithm.
///
/// Each rotation first removes the phase of the pivot `a_pq`, then applies a
/// real Givens rotation. The accumulated transform stays unitary to machine
/// precision, which the reduction and best-response code rely on.
pub fn hermitian_evd(a: &Hermitian) -> HermitianEigen {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += m[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= f64::EPSILON * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the original index order on ties.
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    HermitianEigen { values, vectors }
}

fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let ph = (apq / g).conj();
    let (c, s) = jacobi_rotation(app, aqq, g);
    let n = m.rows();

    // m <- m J, with J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on columns (p, q).
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c - mkq * ph * s;
        m[(k, q)] = mkp * s + mkq * ph * c;
    }
    // m <- J^H m on rows (p, q).
    let phc = ph.conj();
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c - mqk * phc * s;
        m[(q, k)] = mpk * s + mqk * phc * c;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * ph * s;
        v[(k, q)] = vkp * s + vkq * ph * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_hermitian, test_rng};
    use alloc::vec;

    fn unitary_error(u: &CMatrix) -> f64 {
        u.adjoint_mul(u).unwrap().max_abs_diff(&CMatrix::identity(u.cols()))
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let e = hermitian_evd(&Hermitian::identity(2));
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert!(unitary_error(&e.vectors) < 1e-15);
    }

    #[test]
    fn diagonal_input_sorted_descending() {
        let e = hermitian_evd(&Hermitian::from_real_diag(&[1.0, 3.0]));
        assert_eq!(e.values, vec![3.0, 1.0]);
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_evd(&Hermitian::zeros(3));
        assert_eq!(e.values, vec![0.0; 3]);
        assert!(unitary_error(&e.vectors) < 1e-15);
    }

    #[test]
    fn random_round_trip() {
        let mut rng = test_rng(11);
        for n in 1..=8 {
            for _ in 0..20 {
                let a = random_hermitian(&mut rng, n, 3.0);
                let e = hermitian_evd(&a);
                let scale = a.frobenius_norm().max(1.0);
                assert!(e.reconstruct().max_abs_diff(&a) <= 1e-12 * scale);
                assert!(unitary_error(&e.vectors) <= 1e-12);
                assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn repeated_eigenvalues_keep_orthonormal_basis() {
        let mut rng = test_rng(5);
        let u = crate::sampling::haar_unitary(&mut rng, 4);
        let a = Hermitian::from_eigen(&u, &[2.0, 2.0, 2.0, -1.0]);
        let e = hermitian_evd(&a);
        assert!((e.values[0] - 2.0).abs() < 1e-13 && (e.values[3] + 1.0).abs() < 1e-13);
        assert!(e.reconstruct().max_abs_diff(&a) < 1e-13);
        assert!(unitary_error(&e.vectors) < 1e-13);
    }
}
