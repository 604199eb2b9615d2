use alloc::vec::Vec;

use super::{estimate_power_smoothness, EquilibriumError, InterferenceMatrix, InterferenceVariant, PowerSmoothness, SmoothnessConfig};
use crate::game::ReducedScenario;
use crate::linalg::{compact_svd, spectral_radius, CMatrix, LinalgError, RealMatrix};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriteriaReport {
    pub variant: InterferenceVariant,
    pub sr_s: f64,
    /// Spectral radius of `(S + S^T) / 2`.
    pub sr_ssym: f64,
    pub sigma_max_i_plus_s: f64,
    /// Right Perron vector of `S`, floored for use as norm weights.
    pub perron_w: Vec<f64>,
    pub perron_degenerate: bool,
    /// `(1 - sr(S^s)) / sigma_max(I + S)`.
    pub qvi_rhs_constant: f64,
    /// `1 - sr(S)`.
    pub contraction_rhs_constant: f64,
    pub interference_ok_qvi: bool,
    pub interference_ok_contraction: bool,
    pub power_smoothness: Option<PowerSmoothness>,
}

/// Interference part of both uniqueness criteria.
pub fn criteria_from_matrix(s: &RealMatrix) -> Result<CriteriaReport, LinalgError> {
    let n = s.rows();
    let perron = spectral_radius(s)?;
    let sym = spectral_radius(&s.symmetric_part())?;
    let i_plus_s = RealMatrix::from_fn(n, n, |i, j| s[(i, j)] + if i == j { 1.0 } else { 0.0 });
    let sigma = compact_svd(&CMatrix::from_real(&i_plus_s)).sigma_max();
    Ok(CriteriaReport {
        variant: InterferenceVariant::ExactSquare,
        sr_s: perron.radius,
        sr_ssym: sym.radius,
        sigma_max_i_plus_s: sigma,
        perron_w: perron.weights(),
        perron_degenerate: perron.degenerate,
        qvi_rhs_constant: (1.0 - sym.radius) / sigma,
        contraction_rhs_constant: 1.0 - perron.radius,
        interference_ok_qvi: sym.radius < 1.0,
        interference_ok_contraction: perron.radius < 1.0,
        power_smoothness: None,
    })
}

/// Full report for a scenario; the power-mapping modulus is estimated only
/// when `smoothness` is given (with the Perron weights of `S` unless the
/// config supplies its own).
pub fn criteria(
    s: &ReducedScenario,
    ifm: &InterferenceMatrix,
    smoothness: Option<&SmoothnessConfig>,
) -> Result<CriteriaReport, EquilibriumError> {
    let mut report = criteria_from_matrix(&ifm.matrix)?;
    report.variant = ifm.variant;
    if let Some(cfg) = smoothness {
        report.power_smoothness = Some(estimate_power_smoothness(s, cfg, &report.perron_w)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::test_rng;
    use rand::Rng;

    #[test]
    fn no_interference() {
        let r = criteria_from_matrix(&RealMatrix::zeros(3, 3)).unwrap();
        assert_eq!(r.sr_s, 0.0);
        assert!(r.interference_ok_qvi && r.interference_ok_contraction);
        assert!((r.qvi_rhs_constant - 1.0).abs() < 1e-14);
        assert_eq!(r.contraction_rhs_constant, 1.0);
        assert!(r.perron_degenerate);
    }

    #[test]
    fn symmetric_matrix_has_equal_radii() {
        let s = RealMatrix::from_vec(2, 2, alloc::vec![0.0, 0.25, 0.25, 0.0]).unwrap();
        let r = criteria_from_matrix(&s).unwrap();
        assert!((r.sr_s - 0.25).abs() < 1e-12 && (r.sr_ssym - 0.25).abs() < 1e-12);
        assert!((r.sigma_max_i_plus_s - 1.25).abs() < 1e-12);
        let w = 1.0 / 2f64.sqrt();
        assert!((r.perron_w[0] - w).abs() < 1e-12);
    }

    #[test]
    fn random_matrices_respect_orderings() {
        let mut rng = test_rng(12);
        for _ in 0..200 {
            let n = rng.random_range(2..=6);
            let s = RealMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { rng.random::<f64>() * 2.0 });
            let r = criteria_from_matrix(&s).unwrap();
            assert!(r.sr_s <= r.sr_ssym + 1e-9);
            assert!(r.sigma_max_i_plus_s > 1.0);
            if r.interference_ok_qvi {
                assert!(r.interference_ok_contraction);
                assert!(r.qvi_rhs_constant <= r.contraction_rhs_constant + 1e-9);
            }
        }
    }
}
