use alloc::vec::Vec;

use super::EquilibriumError;
use crate::game::{ReducedScenario, StrategyProfile};
use crate::linalg::{CMatrix, Hermitian};

/// The affine map `F(Q)_q = A_q Rn_q A_q^H + sum_r A_q Hbar_qr Q_r Hbar_qr^H A_q^H`
/// with `A_q = Hbar_qq^-1`, precomputed for repeated evaluation.
///
/// The `r = q` term is `Q_q` itself, so `F(Q)_q = Q_q - X_q` where
/// `X_q = -(Hbar_qq^H R_{-q}^-1 Hbar_qq)^-1`.
#[derive(Clone, Debug)]
pub struct QviOperator {
    offsets: Vec<Hermitian>,
    /// `cross[q][r] = A_q Hbar_qr`; unused on the diagonal.
    cross: Vec<Vec<CMatrix>>,
}

impl QviOperator {
    pub fn new(s: &ReducedScenario) -> Result<Self, EquilibriumError> {
        let n = s.players();
        let mut offsets = Vec::with_capacity(n);
        let mut cross = Vec::with_capacity(n);
        for q in 0..n {
            let a = s.direct_inverse(q).ok_or(EquilibriumError::NonSquareDirect(q))?;
            offsets.push(s.noise(q).congruence_by(a)?);
            let row = (0..n)
                .map(|r| {
                    if r == q {
                        Ok(CMatrix::identity(s.rank(q)))
                    } else {
                        a.matmul(s.hbar(q, r))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            cross.push(row);
        }
        Ok(Self { offsets, cross })
    }

    pub fn players(&self) -> usize {
        self.offsets.len()
    }

    pub fn apply(&self, profile: &StrategyProfile) -> Vec<Hermitian> {
        (0..self.players()).map(|q| self.apply_player(q, profile)).collect()
    }

    pub fn apply_player(&self, q: usize, profile: &StrategyProfile) -> Hermitian {
        let mut acc = self.offsets[q].add_h(profile.get(q));
        for (r, cov) in profile.iter().enumerate() {
            if r != q {
                acc = acc.add_h(&cov.congruence_by(&self.cross[q][r]).expect("rank-sized covariance"));
            }
        }
        acc
    }

    /// Linear part only: `F(Q) - F(0)`, used on profile differences.
    pub fn apply_linear(&self, diff: &StrategyProfile) -> Vec<Hermitian> {
        (0..self.players())
            .map(|q| {
                let mut acc = diff.get(q).clone();
                for (r, d) in diff.iter().enumerate() {
                    if r != q {
                        acc = acc.add_h(&d.congruence_by(&self.cross[q][r]).expect("rank-sized covariance"));
                    }
                }
                acc
            })
            .collect()
    }
}

pub fn qvi_map(s: &ReducedScenario, profile: &StrategyProfile) -> Result<Vec<Hermitian>, EquilibriumError> {
    Ok(QviOperator::new(s)?.apply(profile))
}
