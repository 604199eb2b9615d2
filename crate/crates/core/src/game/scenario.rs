use alloc::vec::Vec;

use super::{log_det_i_plus, ScenarioError};
use crate::linalg::{Cholesky, CMatrix, Hermitian};

/// Channels, noise and power parameters of `Q` transmitter-receiver pairs.
///
/// `channel(q, r)` is the `nR[q] x nT[r]` matrix from transmitter `r` to
/// receiver `q`. Antenna counts are read off the direct channels.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkScenario {
    channels: Vec<Vec<CMatrix>>,
    noise: Vec<Hermitian>,
    max_power: Vec<f64>,
    circuit_power: Vec<f64>,
    seed: u64,
}

impl NetworkScenario {
    pub fn new(
        channels: Vec<Vec<CMatrix>>,
        noise: Vec<Hermitian>,
        max_power: Vec<f64>,
        circuit_power: Vec<f64>,
        seed: u64,
    ) -> Result<Self, ScenarioError> {
        let n = channels.len();
        if n == 0 {
            return Err(ScenarioError::NoPlayers);
        }
        for (field, len) in [
            ("noise", noise.len()),
            ("max_power", max_power.len()),
            ("circuit_power", circuit_power.len()),
        ] {
            if len != n {
                return Err(ScenarioError::PlayerCount {
                    field,
                    expected: n,
                    found: len,
                });
            }
        }
        for (q, row) in channels.iter().enumerate() {
            if row.len() != n {
                return Err(ScenarioError::PlayerCount {
                    field: "channels",
                    expected: n,
                    found: row.len(),
                });
            }
            let n_r = channels[q][q].rows();
            for (r, h) in row.iter().enumerate() {
                let expected = (n_r, channels[r][r].cols());
                if h.shape() != expected {
                    return Err(ScenarioError::ChannelShape {
                        q,
                        r,
                        expected,
                        found: h.shape(),
                    });
                }
            }
            if noise[q].dim() != n_r {
                return Err(ScenarioError::NoiseShape(q));
            }
            if Cholesky::new(&noise[q]).is_err() {
                return Err(ScenarioError::NoiseNotPositiveDefinite(q));
            }
            if !(max_power[q] > 0.0 && max_power[q].is_finite()) {
                return Err(ScenarioError::InvalidMaxPower(q));
            }
            if !(circuit_power[q] > 0.0 && circuit_power[q].is_finite()) {
                return Err(ScenarioError::InvalidCircuitPower(q));
            }
        }
        Ok(Self {
            channels,
            noise,
            max_power,
            circuit_power,
            seed,
        })
    }

    pub fn players(&self) -> usize {
        self.channels.len()
    }

    pub fn tx_antennas(&self, q: usize) -> usize {
        self.channels[q][q].cols()
    }

    pub fn rx_antennas(&self, q: usize) -> usize {
        self.channels[q][q].rows()
    }

    pub fn channel(&self, q: usize, r: usize) -> &CMatrix {
        &self.channels[q][r]
    }

    pub fn noise(&self, q: usize) -> &Hermitian {
        &self.noise[q]
    }

    pub fn max_power(&self, q: usize) -> f64 {
        self.max_power[q]
    }

    pub fn circuit_power(&self, q: usize) -> f64 {
        self.circuit_power[q]
    }

    pub fn max_powers(&self) -> &[f64] {
        &self.max_power
    }

    pub fn circuit_powers(&self) -> &[f64] {
        &self.circuit_power
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// MUI-plus-noise covariance in the original (unreduced) game, for
    /// full-size `nT[r] x nT[r]` covariances.
    pub fn mui_covariance_full(&self, q: usize, covariances: &[Hermitian]) -> Hermitian {
        let mut acc = self.noise[q].clone();
        for (r, cov) in covariances.iter().enumerate() {
            if r != q {
                let term = cov.congruence_by(&self.channels[q][r]).expect("validated shapes");
                acc = acc.add_h(&term);
            }
        }
        acc
    }

    /// Rate of player `q` in the original game (nats).
    pub fn rate_full(&self, q: usize, covariances: &[Hermitian]) -> Result<f64, ScenarioError> {
        let mui = self.mui_covariance_full(q, covariances);
        let ch = Cholesky::new(&mui).map_err(|_| ScenarioError::SingularMui(q))?;
        let w = ch.solve_lower(&self.channels[q][q])?;
        Ok(log_det_i_plus(&w, &covariances[q]))
    }
}
