use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{NetworkScenario, ScenarioError};
use crate::linalg::{CMatrix, Hermitian};
use crate::sampling::{complex_gaussian, complex_gaussian_matrix, rng_stream};

/// How the target SNR maps to the noise variance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SnrConvention {
    /// `sigma^2 = (P / n) / SNR`: uniform allocation sees the target SNR on
    /// every stream.
    #[default]
    PerStream,
    /// `sigma^2 = P / SNR`.
    TotalPower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ChannelKind {
    /// i.i.d. entries on the full `n x n` matrix.
    #[default]
    Dense,
    /// i.i.d. diagonal entries only (parallel OFDM subcarriers).
    Diagonal,
}

/// Parameters of a randomly drawn symmetric network.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ScenarioParams {
    pub players: usize,
    pub antennas: usize,
    pub snr_db: f64,
    /// `f64::INFINITY` removes all cross channels.
    pub sir_db: f64,
    pub max_power: f64,
    pub circuit_power: f64,
    pub snr_convention: SnrConvention,
    pub channel_kind: ChannelKind,
    pub seed: u64,
}

impl Default for ScenarioParams {
    /// The reference setup: 8 players, 4 antennas, P = 4, circuit power 1,
    /// SNR 7 dB, SIR 0 dB.
    fn default() -> Self {
        Self {
            players: 8,
            antennas: 4,
            snr_db: 7.0,
            sir_db: 0.0,
            max_power: 4.0,
            circuit_power: 1.0,
            snr_convention: SnrConvention::PerStream,
            channel_kind: ChannelKind::Dense,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub scenario: NetworkScenario,
    /// Set when a finite SIR was requested for a single-player network.
    pub sir_ignored: bool,
}

pub fn db_to_linear(db: f64) -> f64 {
    10.0.powf(db / 10.0)
}

/// Draws a scenario with i.i.d. circularly-symmetric Gaussian channels.
///
/// Direct channels have unit entry variance; cross channels have variance
/// `1 / ((Q - 1) SIR)`. Each `(q, r)` matrix is drawn from its own ChaCha
/// stream, so a given matrix does not change when `Q` or the SIR changes
/// (the SIR only rescales it).
pub fn generate_scenario(params: &ScenarioParams) -> Result<Generated, ScenarioError> {
    let q_count = params.players;
    let n = params.antennas;
    if q_count == 0 {
        return Err(ScenarioError::NoPlayers);
    }
    if n == 0 {
        return Err(ScenarioError::InvalidParameter("antennas must be at least 1"));
    }
    if params.snr_db.is_nan() || params.snr_db == f64::NEG_INFINITY {
        return Err(ScenarioError::InvalidParameter("snr_db must be a number above -inf"));
    }
    if params.sir_db.is_nan() {
        return Err(ScenarioError::InvalidParameter("sir_db must be a number"));
    }

    let snr = db_to_linear(params.snr_db);
    let noise_var = match params.snr_convention {
        SnrConvention::PerStream => params.max_power / n as f64 / snr,
        SnrConvention::TotalPower => params.max_power / snr,
    };
    if !(noise_var > 0.0 && noise_var.is_finite()) {
        return Err(ScenarioError::InvalidParameter("SNR gives a non-positive noise variance"));
    }
    let sir_ignored = q_count == 1 && params.sir_db.is_finite();
    let cross_var = if q_count == 1 {
        0.0
    } else {
        1.0 / ((q_count - 1) as f64 * db_to_linear(params.sir_db))
    };

    let mut channels = Vec::with_capacity(q_count);
    for q in 0..q_count {
        let mut row = Vec::with_capacity(q_count);
        for r in 0..q_count {
            let var = if q == r { 1.0 } else { cross_var };
            let mut rng = rng_stream(params.seed, ((q as u64) << 32) | r as u64);
            let h = match params.channel_kind {
                ChannelKind::Dense => complex_gaussian_matrix(&mut rng, n, n, var),
                ChannelKind::Diagonal => {
                    let mut h = CMatrix::zeros(n, n);
                    for k in 0..n {
                        h[(k, k)] = complex_gaussian(&mut rng, var);
                    }
                    h
                }
            };
            row.push(h);
        }
        channels.push(row);
    }
    let noise = (0..q_count)
        .map(|_| Hermitian::scaled_identity(n, noise_var))
        .collect();
    let scenario = NetworkScenario::new(
        channels,
        noise,
        alloc::vec![params.max_power; q_count],
        alloc::vec![params.circuit_power; q_count],
        params.seed,
    )?;
    Ok(Generated {
        scenario,
        sir_ignored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_setup_shapes_and_noise() {
        let g = generate_scenario(&ScenarioParams::default()).unwrap();
        let s = &g.scenario;
        assert_eq!(s.players(), 8);
        assert!(!g.sir_ignored);
        for q in 0..8 {
            assert_eq!(s.channel(q, (q + 1) % 8).shape(), (4, 4));
            // (4 / 4) / 10^0.7
            let expected = 1.0 / 10f64.powf(0.7);
            assert!((s.noise(q)[(0, 0)].re - expected).abs() < 1e-15);
            assert_eq!(s.max_power(q), 4.0);
            assert_eq!(s.circuit_power(q), 1.0);
        }
    }

    #[test]
    fn single_player_flags_ignored_sir() {
        let p = ScenarioParams {
            players: 1,
            ..ScenarioParams::default()
        };
        let g = generate_scenario(&p).unwrap();
        assert!(g.sir_ignored);
        assert_eq!(g.scenario.players(), 1);
        let p = ScenarioParams {
            players: 1,
            sir_db: f64::INFINITY,
            ..ScenarioParams::default()
        };
        assert!(!generate_scenario(&p).unwrap().sir_ignored);
    }

    #[test]
    fn infinite_sir_removes_cross_channels() {
        let p = ScenarioParams {
            players: 2,
            sir_db: f64::INFINITY,
            ..ScenarioParams::default()
        };
        let s = generate_scenario(&p).unwrap().scenario;
        assert_eq!(s.channel(0, 1).max_abs(), 0.0);
        assert!(s.channel(0, 0).max_abs() > 0.0);
    }

    #[test]
    fn sir_only_rescales_cross_channels() {
        let base = ScenarioParams {
            players: 3,
            antennas: 2,
            seed: 11,
            ..ScenarioParams::default()
        };
        let a = generate_scenario(&base).unwrap().scenario;
        let b = generate_scenario(&ScenarioParams {
            sir_db: 10.0,
            ..base.clone()
        })
        .unwrap()
        .scenario;
        assert_eq!(a.channel(1, 1), b.channel(1, 1));
        let scaled = a.channel(0, 2).scale(10f64.powf(-0.5));
        assert!(scaled.max_abs_diff(b.channel(0, 2)) < 1e-15);
    }

    #[test]
    fn deterministic_given_seed() {
        let p = ScenarioParams {
            seed: 5,
            ..ScenarioParams::default()
        };
        assert_eq!(
            generate_scenario(&p).unwrap().scenario,
            generate_scenario(&p).unwrap().scenario
        );
    }

    #[test]
    fn diagonal_kind_has_no_off_diagonal_entries() {
        let p = ScenarioParams {
            channel_kind: ChannelKind::Diagonal,
            ..ScenarioParams::default()
        };
        let s = generate_scenario(&p).unwrap().scenario;
        let h = s.channel(2, 5);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(i != j, h[(i, j)].norm() == 0.0);
            }
        }
    }

    #[test]
    fn total_power_convention() {
        let p = ScenarioParams {
            snr_convention: SnrConvention::TotalPower,
            snr_db: 10.0,
            ..ScenarioParams::default()
        };
        let s = generate_scenario(&p).unwrap().scenario;
        assert!((s.noise(0)[(1, 1)].re - 0.4).abs() < 1e-15);
    }
}
