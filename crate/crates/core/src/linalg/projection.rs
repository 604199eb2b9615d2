use alloc::vec::Vec;

use super::{hermitian_evd, Hermitian, LinalgError, WATER_LEVEL_TOL};

/// Solves `sum_k (level - floors[k])^+ = total` for `level`.
///
/// Bisection on the bracket `[min floor, max floor + total]` (the left side is
/// monotone and piecewise linear), followed by the closed form
/// `(total + sum_{active} floor) / |active|` on the identified active set, so
/// the returned level reproduces `total` to rounding.
pub fn water_level(floors: &[f64], total: f64) -> f64 {
    assert!(!floors.is_empty(), "water level needs at least one channel");
    let lo0 = floors.iter().copied().fold(f64::INFINITY, f64::min);
    if total <= 0.0 {
        return lo0;
    }
    let fill = |level: f64| -> f64 { floors.iter().map(|&f| (level - f).max(0.0)).sum() };
    let mut lo = lo0;
    let mut hi = floors.iter().copied().fold(f64::NEG_INFINITY, f64::max) + total;
    while hi - lo > WATER_LEVEL_TOL * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if fill(mid) < total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let bisected = 0.5 * (lo + hi);

    let active: Vec<f64> = floors.iter().copied().filter(|&f| f < bisected).collect();
    if active.is_empty() {
        return bisected;
    }
    let exact = (total + active.iter().sum::<f64>()) / active.len() as f64;
    // The closed form is only valid if it keeps the same active set.
    let slack = WATER_LEVEL_TOL * exact.abs().max(1.0);
    let consistent = floors.iter().all(|&f| {
        if f < bisected {
            f <= exact + slack
        } else {
            f >= exact - slack
        }
    });
    if consistent {
        exact
    } else {
        bisected
    }
}

/// Frobenius-norm projection of `a` onto `{X >= 0, Tr X = p}`.
///
/// With `a = U diag(lambda) U^H` the projection is
/// `U diag((lambda + theta)^+) U^H` with `theta` the unique shift making the
/// trace equal to `p`.
pub fn psd_trace_projection(a: &Hermitian, p: f64) -> Result<Hermitian, LinalgError> {
    if !(p >= 0.0) || !p.is_finite() {
        return Err(LinalgError::NegativePower(p));
    }
    let n = a.dim();
    if p == 0.0 || n == 0 {
        return Ok(Hermitian::zeros(n));
    }
    let eig = hermitian_evd(a);
    let floors: Vec<f64> = eig.values.iter().map(|&l| -l).collect();
    let theta = water_level(&floors, p);
    let powers: Vec<f64> = eig.values.iter().map(|&l| (l + theta).max(0.0)).collect();
    Ok(Hermitian::from_eigen(&eig.vectors, &powers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::sampling::{random_hermitian, random_psd_with_trace, test_rng};
    use rand::Rng;

    /// Independent oracle: bisection on the KKT shift with a fixed iteration
    /// count and no active-set polish.
    fn kkt_shift_oracle(eigs: &[f64], p: f64) -> f64 {
        let (mut lo, mut hi) = (-1e6, 1e6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let s: f64 = eigs.iter().map(|&l| (l + mid).max(0.0)).sum();
            if s < p {
                lo = mid
            } else {
                hi = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn diag_three_one_projects_to_two_zero() {
        let shift = kkt_shift_oracle(&[3.0, 1.0], 2.0);
        assert!((shift + 1.0).abs() < 1e-12);
        let x = psd_trace_projection(&Hermitian::from_real_diag(&[3.0, 1.0]), 2.0).unwrap();
        assert!(x.max_abs_diff(&CMatrix::from_real_diag(&[2.0, 0.0])) < 1e-12);
    }

    #[test]
    fn feasible_input_is_fixed() {
        let mut rng = test_rng(9);
        let a = random_psd_with_trace(&mut rng, 3, 2.5);
        let x = psd_trace_projection(&a, 2.5).unwrap();
        assert!(x.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn negative_identity_splits_equally() {
        let x = psd_trace_projection(&Hermitian::scaled_identity(2, -1.0), 4.0).unwrap();
        assert!(x.max_abs_diff(&CMatrix::from_real_diag(&[2.0, 2.0])) < 1e-12);
    }

    #[test]
    fn negative_power_rejected() {
        assert_eq!(
            psd_trace_projection(&Hermitian::identity(2), -1.0).unwrap_err(),
            LinalgError::NegativePower(-1.0)
        );
    }

    #[test]
    fn water_level_closed_forms() {
        // floors 1/d for d = (1, 0.1)
        assert!((water_level(&[1.0, 10.0], 11.0) - 11.0).abs() < 1e-12);
        assert!((water_level(&[1.0, 10.0], 1.0) - 2.0).abs() < 1e-12);
        assert_eq!(water_level(&[3.0, 1.0], 0.0), 1.0);
    }

    #[test]
    fn projection_is_nearest_feasible_point() {
        let mut rng = test_rng(77);
        for _ in 0..100 {
            let n = rng.random_range(1..=5);
            let p = rng.random_range(0.0..5.0);
            let a = random_hermitian(&mut rng, n, 2.0);
            let x = psd_trace_projection(&a, p).unwrap();
            assert!((x.trace_re() - p).abs() <= 1e-10);
            assert!(hermitian_evd(&x).min_value() >= -1e-12);
            let d0 = (a.as_matrix() - x.as_matrix()).frobenius_norm();
            for _ in 0..50 {
                let y = random_psd_with_trace(&mut rng, n, p);
                let d = (a.as_matrix() - y.as_matrix()).frobenius_norm();
                assert!(d >= d0 - 1e-10, "found a closer feasible point: {d} < {d0}");
                // Points near the projection along the segment must not be closer either.
                let t = rng.random_range(0.0..0.05);
                let z = x.scale_h(1.0 - t).add_h(&y.scale_h(t));
                let dz = (a.as_matrix() - z.as_matrix()).frobenius_norm();
                assert!(dz >= d0 - 1e-10);
            }
        }
    }
}
