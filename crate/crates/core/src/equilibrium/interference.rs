use alloc::vec::Vec;

use super::EquilibriumError;
use crate::game::{NetworkScenario, ReducedScenario, StrategyProfile};
use crate::linalg::{compact_svd, pseudo_inverse, Cholesky, CMatrix, RealMatrix};
use crate::sampling::{random_full_power, rng_from_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum InterferenceVariant {
    ExactSquare,
    PseudoinverseRowRank,
    /// Maximum over sampled full-power profiles: a lower bound on the exact
    /// maximum.
    SampledColumnRank { samples: usize },
}

/// Nonnegative `Q x Q` matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InterferenceMatrix {
    pub matrix: RealMatrix,
    pub variant: InterferenceVariant,
}

fn sigma_max_sqr(m: &CMatrix) -> f64 {
    let s = compact_svd(m).sigma_max();
    s * s
}

/// `S_qr = sigma_max^2(Hbar_qq^-1 Hbar_qr)`.
pub fn interference_matrix_square(s: &ReducedScenario) -> Result<InterferenceMatrix, EquilibriumError> {
    let n = s.players();
    let mut m = RealMatrix::zeros(n, n);
    for q in 0..n {
        let inv = s.direct_inverse(q).ok_or(EquilibriumError::NonSquareDirect(q))?;
        for r in (0..n).filter(|&r| r != q) {
            m[(q, r)] = sigma_max_sqr(&inv.matmul(s.hbar(q, r))?);
        }
    }
    Ok(InterferenceMatrix {
        matrix: m,
        variant: InterferenceVariant::ExactSquare,
    })
}

fn row_rank_pinvs(s: &NetworkScenario) -> Result<Vec<CMatrix>, EquilibriumError> {
    (0..s.players())
        .map(|q| {
            let h = s.channel(q, q);
            if compact_svd(h).rank() != h.rows() {
                return Err(EquilibriumError::RowRankDeficient(q));
            }
            Ok(pseudo_inverse(h))
        })
        .collect()
}

/// `S_qr = sigma_max^2(H_qq^# H_qr V_{r,1})` for full-row-rank direct channels.
pub fn interference_matrix_rowrank(s: &NetworkScenario) -> Result<InterferenceMatrix, EquilibriumError> {
    let pinvs = row_rank_pinvs(s)?;
    let reduced = s.reduce()?;
    let n = s.players();
    let mut m = RealMatrix::zeros(n, n);
    for q in 0..n {
        for r in (0..n).filter(|&r| r != q) {
            let a = pinvs[q].matmul(s.channel(q, r))?.matmul(reduced.v1(r))?;
            m[(q, r)] = sigma_max_sqr(&a);
        }
    }
    Ok(InterferenceMatrix {
        matrix: m,
        variant: InterferenceVariant::PseudoinverseRowRank,
    })
}

/// `sigma_max^2(H_qq^# H_qr)` without the `V_{r,1}` factor; entrywise an upper
/// bound on [`interference_matrix_rowrank`].
pub fn rowrank_unfactored_bound(s: &NetworkScenario) -> Result<RealMatrix, EquilibriumError> {
    let pinvs = row_rank_pinvs(s)?;
    let n = s.players();
    let mut m = RealMatrix::zeros(n, n);
    for q in 0..n {
        for r in (0..n).filter(|&r| r != q) {
            m[(q, r)] = sigma_max_sqr(&pinvs[q].matmul(s.channel(q, r))?);
        }
    }
    Ok(m)
}

/// Sampled version for full-column-rank (possibly tall) direct channels.
///
/// Entry `(q, r)` is the largest `sigma_max^2(G_qr(Delta))` over `n_samples`
/// random full-power profiles `Delta`, with
/// `G_qr = (Hbar_qq^H R^-1 Hbar_qq)^-1 Hbar_qq^H R^-1 Hbar_qr` evaluated as
/// `pinv(L^-1 Hbar_qq) L^-1 Hbar_qr`, `R = L L^H`. Samples are drawn from one
/// stream, so a run with more samples extends a run with fewer.
pub fn interference_matrix_sampled(
    s: &ReducedScenario,
    n_samples: usize,
    seed: u64,
) -> Result<InterferenceMatrix, EquilibriumError> {
    if n_samples == 0 {
        return Err(EquilibriumError::InvalidParameter("n_samples must be at least 1"));
    }
    let n = s.players();
    let mut rng = rng_from_seed(seed);
    let mut m = RealMatrix::zeros(n, n);
    for _ in 0..n_samples {
        let delta = StrategyProfile::new(
            (0..n)
                .map(|r| random_full_power(&mut rng, s.rank(r), s.max_power(r)))
                .collect(),
        );
        for q in 0..n {
            let mui = s.mui_covariance(q, &delta);
            let ch = Cholesky::new(&mui)?;
            let a = ch.solve_lower(s.hbar(q, q))?;
            let svd = compact_svd(&a);
            if svd.rank() != s.rank(q) {
                return Err(EquilibriumError::RankLoss(q));
            }
            let a_pinv = pseudo_inverse(&a);
            for r in (0..n).filter(|&r| r != q) {
                let g = a_pinv.matmul(&ch.solve_lower(s.hbar(q, r))?)?;
                let v = sigma_max_sqr(&g);
                if v > m[(q, r)] {
                    m[(q, r)] = v;
                }
            }
        }
    }
    Ok(InterferenceMatrix {
        matrix: m,
        variant: InterferenceVariant::SampledColumnRank { samples: n_samples },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{generate_scenario, ChannelKind, ScenarioParams};
    use crate::linalg::{Hermitian, C64};
    use crate::sampling::{complex_gaussian_matrix, test_rng};
    use alloc::vec;

    fn scaled_identity_network(q: usize, n: usize, alpha: f64) -> NetworkScenario {
        let channels = (0..q)
            .map(|i| {
                (0..q)
                    .map(|j| {
                        if i == j {
                            CMatrix::identity(n)
                        } else {
                            CMatrix::identity(n).scale(alpha)
                        }
                    })
                    .collect()
            })
            .collect();
        NetworkScenario::new(channels, vec![Hermitian::identity(n); q], vec![1.0; q], vec![1.0; q], 0).unwrap()
    }

    #[test]
    fn scaled_identity_cross_channels() {
        let s = scaled_identity_network(3, 2, 0.4).reduce().unwrap();
        let m = interference_matrix_square(&s).unwrap().matrix;
        for q in 0..3 {
            for r in 0..3 {
                let expected = if q == r { 0.0 } else { 0.16 };
                assert!((m[(q, r)] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ofdm_entries_are_worst_subcarrier_ratios() {
        let net = generate_scenario(&ScenarioParams {
            players: 3,
            channel_kind: ChannelKind::Diagonal,
            seed: 2,
            ..ScenarioParams::default()
        })
        .unwrap()
        .scenario;
        let m = interference_matrix_square(&net.reduce().unwrap()).unwrap().matrix;
        for q in 0..3 {
            for r in (0..3).filter(|&r| r != q) {
                let oracle = (0..4)
                    .map(|k| (net.channel(q, r)[(k, k)] / net.channel(q, q)[(k, k)]).norm_sqr())
                    .fold(0.0, f64::max);
                assert!((m[(q, r)] - oracle).abs() <= 1e-12 * oracle.max(1.0));
            }
        }
    }

    #[test]
    fn rowrank_matches_square_for_square_channels() {
        let net = generate_scenario(&ScenarioParams {
            players: 4,
            antennas: 3,
            seed: 8,
            ..ScenarioParams::default()
        })
        .unwrap()
        .scenario;
        let a = interference_matrix_square(&net.reduce().unwrap()).unwrap().matrix;
        let b = interference_matrix_rowrank(&net).unwrap().matrix;
        assert!(a.max_abs_diff(&b) <= 1e-10 * a.as_slice().iter().fold(1.0, |m: f64, x| m.max(*x)));
        let c = rowrank_unfactored_bound(&net).unwrap();
        assert!(b.max_abs_diff(&c) <= 1e-10 * c.as_slice().iter().fold(1.0, |m: f64, x| m.max(*x)));
    }

    fn wide_network(seed: u64) -> NetworkScenario {
        let mut rng = test_rng(seed);
        let channels = (0..3)
            .map(|_| (0..3).map(|_| complex_gaussian_matrix(&mut rng, 2, 4, 1.0)).collect())
            .collect();
        NetworkScenario::new(channels, vec![Hermitian::identity(2); 3], vec![1.0; 3], vec![1.0; 3], 0).unwrap()
    }

    #[test]
    fn v_factor_only_tightens() {
        for seed in 0..10 {
            let net = wide_network(seed);
            let b = interference_matrix_rowrank(&net).unwrap().matrix;
            let c = rowrank_unfactored_bound(&net).unwrap();
            for (x, y) in b.as_slice().iter().zip(c.as_slice()) {
                assert!(*x <= *y * (1.0 + 1e-12));
            }
            // The reduced game is square here, and the corollary form agrees with it.
            let exact = interference_matrix_square(&net.reduce().unwrap()).unwrap().matrix;
            assert!(exact.max_abs_diff(&b) <= 1e-9 * b.as_slice().iter().fold(1.0, |m: f64, x| m.max(*x)));
        }
    }

    #[test]
    fn rank_deficient_rows_rejected() {
        let one = CMatrix::from_vec(2, 2, vec![C64::new(1.0, 0.0); 4]).unwrap();
        let net = NetworkScenario::new(vec![vec![one]], vec![Hermitian::identity(2)], vec![1.0], vec![1.0], 0).unwrap();
        assert_eq!(
            interference_matrix_rowrank(&net).unwrap_err(),
            EquilibriumError::RowRankDeficient(0)
        );
    }

    #[test]
    fn sampled_equals_exact_for_square_channels() {
        let s = generate_scenario(&ScenarioParams {
            players: 3,
            antennas: 3,
            seed: 1,
            ..ScenarioParams::default()
        })
        .unwrap()
        .scenario
        .reduce()
        .unwrap();
        let exact = interference_matrix_square(&s).unwrap().matrix;
        let sampled = interference_matrix_sampled(&s, 5, 99).unwrap().matrix;
        let scale = exact.as_slice().iter().fold(1.0, |m: f64, x| m.max(*x));
        assert!(exact.max_abs_diff(&sampled) <= 1e-9 * scale);
    }

    #[test]
    fn tall_channels_sampled_monotone_in_sample_count() {
        let mut rng = test_rng(3);
        let channels = (0..3)
            .map(|_| (0..3).map(|_| complex_gaussian_matrix(&mut rng, 4, 2, 1.0)).collect())
            .collect();
        let net = NetworkScenario::new(channels, vec![Hermitian::identity(4); 3], vec![2.0; 3], vec![1.0; 3], 0).unwrap();
        let s = net.reduce().unwrap();
        assert!(!s.all_direct_square());
        assert!(interference_matrix_square(&s).is_err());
        let one = interference_matrix_sampled(&s, 1, 4).unwrap().matrix;
        let many = interference_matrix_sampled(&s, 100, 4).unwrap().matrix;
        for (a, b) in one.as_slice().iter().zip(many.as_slice()) {
            assert!(a.is_finite() && *a <= *b);
        }
        for q in 0..3 {
            assert_eq!(many[(q, q)], 0.0);
        }
    }
}
