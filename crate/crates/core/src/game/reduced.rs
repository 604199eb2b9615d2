use alloc::vec::Vec;

use super::{log_det_i_plus, NetworkScenario, ScenarioError, StrategyProfile};
use crate::linalg::{compact_svd, Cholesky, CMatrix, Hermitian, Lu};

/// The equivalent game on the row spaces of the direct channels.
///
/// With `H_qq = U_1 Sigma V_1^H` (compact SVD), player `q` only transmits
/// along the `r_q` columns of `V_1[q]`, and every channel into player `r`'s
/// transmit space becomes `Hbar[q][r] = H[q][r] V_1[r]`. When `H_qq` already
/// has full column rank, `V_1[q]` is taken to be the identity so the reduced
/// channels coincide with the original ones.
#[derive(Clone, Debug)]
pub struct ReducedScenario {
    ranks: Vec<usize>,
    hbar: Vec<Vec<CMatrix>>,
    v1: Vec<CMatrix>,
    direct_inverse: Vec<Option<CMatrix>>,
    noise: Vec<Hermitian>,
    max_power: Vec<f64>,
    circuit_power: Vec<f64>,
}

impl NetworkScenario {
    pub fn reduce(&self) -> Result<ReducedScenario, ScenarioError> {
        ReducedScenario::new(self)
    }
}

impl ReducedScenario {
    pub fn new(s: &NetworkScenario) -> Result<Self, ScenarioError> {
        let n = s.players();
        let mut ranks = Vec::with_capacity(n);
        let mut v1 = Vec::with_capacity(n);
        for q in 0..n {
            let h = s.channel(q, q);
            let svd = compact_svd(h);
            let rank = svd.rank();
            if rank == 0 {
                return Err(ScenarioError::ZeroDirectChannel(q));
            }
            ranks.push(rank);
            v1.push(if rank == h.cols() {
                CMatrix::identity(rank)
            } else {
                svd.v
            });
        }
        let hbar: Vec<Vec<CMatrix>> = (0..n)
            .map(|q| {
                (0..n)
                    .map(|r| {
                        let h = s.channel(q, r);
                        if ranks[r] == s.tx_antennas(r) {
                            h.clone()
                        } else {
                            h.matmul(&v1[r]).expect("validated shapes")
                        }
                    })
                    .collect()
            })
            .collect();
        let direct_inverse = (0..n)
            .map(|q| {
                let h = &hbar[q][q];
                if h.is_square() {
                    Lu::new(h).ok().map(|lu| lu.inverse())
                } else {
                    None
                }
            })
            .collect();
        Ok(Self {
            ranks,
            hbar,
            v1,
            direct_inverse,
            noise: (0..n).map(|q| s.noise(q).clone()).collect(),
            max_power: s.max_powers().to_vec(),
            circuit_power: s.circuit_powers().to_vec(),
        })
    }

    pub fn players(&self) -> usize {
        self.ranks.len()
    }

    pub fn rank(&self, q: usize) -> usize {
        self.ranks[q]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn hbar(&self, q: usize, r: usize) -> &CMatrix {
        &self.hbar[q][r]
    }

    pub fn v1(&self, q: usize) -> &CMatrix {
        &self.v1[q]
    }

    /// `Hbar[q][q]^-1` when the reduced direct channel is square and
    /// nonsingular.
    pub fn direct_inverse(&self, q: usize) -> Option<&CMatrix> {
        self.direct_inverse[q].as_ref()
    }

    /// True when every reduced direct channel is square and nonsingular.
    pub fn all_direct_square(&self) -> bool {
        self.direct_inverse.iter().all(Option::is_some)
    }

    pub fn noise(&self, q: usize) -> &Hermitian {
        &self.noise[q]
    }

    pub fn max_power(&self, q: usize) -> f64 {
        self.max_power[q]
    }

    pub fn max_powers(&self) -> &[f64] {
        &self.max_power
    }

    pub fn circuit_power(&self, q: usize) -> f64 {
        self.circuit_power[q]
    }

    /// Lifts a reduced covariance back to transmit antennas: `V1 Q V1^H`.
    pub fn lift(&self, q: usize, cov: &Hermitian) -> Hermitian {
        cov.congruence_by(&self.v1[q]).expect("rank-sized covariance")
    }

    /// `Rn[q] + sum_{r != q} Hbar[q][r] Q[r] Hbar[q][r]^H`.
    pub fn mui_covariance(&self, q: usize, profile: &StrategyProfile) -> Hermitian {
        let mut acc = self.noise[q].clone();
        for (r, cov) in profile.iter().enumerate() {
            if r != q {
                let term = cov.congruence_by(&self.hbar[q][r]).expect("rank-sized covariance");
                acc = acc.add_h(&term);
            }
        }
        acc
    }

    /// `L^-1 Hbar[q][q]` with `mui = L L^H`.
    pub(crate) fn whitened_direct(&self, q: usize, mui: &Hermitian) -> Result<CMatrix, ScenarioError> {
        let ch = Cholesky::new(mui).map_err(|_| ScenarioError::SingularMui(q))?;
        Ok(ch.solve_lower(&self.hbar[q][q])?)
    }

    /// `Hbar_qq^H R^-1 Hbar_qq` for a given MUI covariance `R`.
    pub fn whitened_gram_given_mui(&self, q: usize, mui: &Hermitian) -> Result<Hermitian, ScenarioError> {
        let w = self.whitened_direct(q, mui)?;
        Ok(Hermitian::symmetrize(w.adjoint_mul(&w)?))
    }

    pub fn whitened_gram(&self, q: usize, profile: &StrategyProfile) -> Result<Hermitian, ScenarioError> {
        self.whitened_gram_given_mui(q, &self.mui_covariance(q, profile))
    }

    /// `ln det(I + Hbar^H R^-1 Hbar Q_q)` in nats.
    pub fn rate(&self, q: usize, profile: &StrategyProfile) -> Result<f64, ScenarioError> {
        let w = self.whitened_direct(q, &self.mui_covariance(q, profile))?;
        Ok(log_det_i_plus(&w, profile.get(q)))
    }

    /// Rate over consumed power, `R_q / (Psi_q + Tr Q_q)`.
    pub fn energy_efficiency(&self, q: usize, profile: &StrategyProfile) -> Result<f64, ScenarioError> {
        let rate = self.rate(q, profile)?;
        Ok(rate / (self.circuit_power[q] + profile.get(q).trace_re()))
    }

    pub fn energy_efficiencies(&self, profile: &StrategyProfile) -> Result<Vec<f64>, ScenarioError> {
        (0..self.players()).map(|q| self.energy_efficiency(q, profile)).collect()
    }
}
