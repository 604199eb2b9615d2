use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{ReducedScenario, ScenarioError, FEASIBILITY_TOL};
use crate::linalg::{hermitian_evd, Hermitian};

/// One covariance matrix per player, in the reduced coordinates.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct StrategyProfile {
    covariances: Vec<Hermitian>,
}

impl StrategyProfile {
    pub fn new(covariances: Vec<Hermitian>) -> Self {
        Self { covariances }
    }

    /// `(P_q / r_q) I` for every player.
    pub fn uniform(s: &ReducedScenario) -> Self {
        Self::new(
            (0..s.players())
                .map(|q| Hermitian::scaled_identity(s.rank(q), s.max_power(q) / s.rank(q) as f64))
                .collect(),
        )
    }

    pub fn zeros(s: &ReducedScenario) -> Self {
        Self::new((0..s.players()).map(|q| Hermitian::zeros(s.rank(q))).collect())
    }

    pub fn len(&self) -> usize {
        self.covariances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covariances.is_empty()
    }

    pub fn get(&self, q: usize) -> &Hermitian {
        &self.covariances[q]
    }

    pub fn set(&mut self, q: usize, cov: Hermitian) {
        self.covariances[q] = cov;
    }

    pub fn as_slice(&self) -> &[Hermitian] {
        &self.covariances
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Hermitian> {
        self.covariances.iter()
    }

    pub fn into_vec(self) -> Vec<Hermitian> {
        self.covariances
    }

    pub fn traces(&self) -> Vec<f64> {
        self.covariances.iter().map(|c| c.trace_re()).collect()
    }

    /// Checks shapes, PSD-ness and budgets with [`FEASIBILITY_TOL`] slack.
    pub fn validate(&self, s: &ReducedScenario) -> Result<(), ScenarioError> {
        if self.len() != s.players() {
            return Err(ScenarioError::ProfileLength {
                expected: s.players(),
                found: self.len(),
            });
        }
        for (q, c) in self.covariances.iter().enumerate() {
            if c.dim() != s.rank(q) {
                return Err(ScenarioError::ProfileShape {
                    q,
                    expected: s.rank(q),
                    found: c.dim(),
                });
            }
            let scale = c.max_abs().max(1.0);
            let min_eig = hermitian_evd(c).min_value();
            if min_eig < -FEASIBILITY_TOL * scale {
                return Err(ScenarioError::ProfileNotPsd { q, min_eig });
            }
            let trace = c.trace_re();
            if trace > s.max_power(q) + FEASIBILITY_TOL {
                return Err(ScenarioError::ProfileOverBudget {
                    q,
                    trace,
                    budget: s.max_power(q),
                });
            }
        }
        Ok(())
    }

    /// `sqrt(sum_q ||A_q - B_q||_F^2)`.
    pub fn frobenius_distance(&self, other: &StrategyProfile) -> f64 {
        self.block_distances(other)
            .iter()
            .map(|d| d * d)
            .sum::<f64>()
            .sqrt()
    }

    /// Per-player Frobenius distances.
    pub fn block_distances(&self, other: &StrategyProfile) -> Vec<f64> {
        assert_eq!(self.len(), other.len(), "profiles of different sizes");
        self.covariances
            .iter()
            .zip(&other.covariances)
            .map(|(a, b)| (a.as_matrix() - b.as_matrix()).frobenius_norm())
            .collect()
    }

    /// Weighted block-maximum distance `max_q ||A_q - B_q||_F / w_q`.
    pub fn block_max_distance(&self, other: &StrategyProfile, weights: &[f64]) -> f64 {
        self.block_distances(other)
            .iter()
            .zip(weights)
            .map(|(d, w)| d / w)
            .fold(0.0, f64::max)
    }
}
