//! Scenario JSON: complex entries as `[re, im]`, matrices as lists of rows.

use std::fs;
use std::path::Path;

use mimo_ee_core::game::{ChannelKind, ScenarioParams, SnrConvention};
use mimo_ee_core::{CMatrix, Hermitian, NetworkScenario, C64};
use serde::{Deserialize, Serialize};

use crate::config::db;
use crate::{json, HarnessError};

type Rows = Vec<Vec<[f64; 2]>>;

/// How a generated scenario was drawn; kept in the file for provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorInfo {
    pub snr_db: f64,
    #[serde(with = "db")]
    pub sir_db: f64,
    pub snr_convention: SnrConvention,
    pub channel_kind: ChannelKind,
}

impl From<&ScenarioParams> for GeneratorInfo {
    fn from(p: &ScenarioParams) -> Self {
        Self {
            snr_db: p.snr_db,
            sir_db: p.sir_db,
            snr_convention: p.snr_convention,
            channel_kind: p.channel_kind,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(rename = "Q")]
    pub players: usize,
    #[serde(rename = "nT")]
    pub tx_antennas: Vec<usize>,
    #[serde(rename = "nR")]
    pub rx_antennas: Vec<usize>,
    /// `H[q][r]`: channel from transmitter `r` to receiver `q`.
    #[serde(rename = "H")]
    pub channels: Vec<Vec<Rows>>,
    #[serde(rename = "Rn")]
    pub noise: Vec<Rows>,
    #[serde(rename = "P")]
    pub max_power: Vec<f64>,
    #[serde(rename = "Psi")]
    pub circuit_power: Vec<f64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
}

fn rows_of(m: &CMatrix) -> Rows {
    // `+ 0.0` maps -0 to +0, so a written file reloads to the same text.
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re + 0.0, m[(i, j)].im + 0.0]).collect())
        .collect()
}

fn matrix_of(rows: &Rows) -> Result<CMatrix, HarnessError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(HarnessError::Invalid("ragged matrix rows".into()));
    }
    let data = rows.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
    Ok(CMatrix::from_vec(rows.len(), cols, data)?)
}

impl ScenarioFile {
    pub fn from_scenario(s: &NetworkScenario, generator: Option<GeneratorInfo>) -> Self {
        let n = s.players();
        Self {
            players: n,
            tx_antennas: (0..n).map(|q| s.tx_antennas(q)).collect(),
            rx_antennas: (0..n).map(|q| s.rx_antennas(q)).collect(),
            channels: (0..n)
                .map(|q| (0..n).map(|r| rows_of(s.channel(q, r))).collect())
                .collect(),
            noise: (0..n).map(|q| rows_of(s.noise(q))).collect(),
            max_power: s.max_powers().to_vec(),
            circuit_power: s.circuit_powers().to_vec(),
            seed: s.seed(),
            generator,
        }
    }

    /// Validates shapes against `Q`, `nT`, `nR` before building.
    pub fn to_scenario(&self) -> Result<NetworkScenario, HarnessError> {
        let n = self.players;
        if self.tx_antennas.len() != n || self.rx_antennas.len() != n {
            return Err(HarnessError::Invalid("nT and nR need one entry per player".into()));
        }
        if self.channels.len() != n || self.channels.iter().any(|row| row.len() != n) {
            return Err(HarnessError::Invalid("H must be Q x Q matrices".into()));
        }
        let mut channels = Vec::with_capacity(n);
        for (q, row) in self.channels.iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (r, rows) in row.iter().enumerate() {
                let h = matrix_of(rows)?;
                if h.shape() != (self.rx_antennas[q], self.tx_antennas[r]) {
                    return Err(HarnessError::Invalid(format!(
                        "H[{q}][{r}] is {}x{}, expected {}x{}",
                        h.rows(),
                        h.cols(),
                        self.rx_antennas[q],
                        self.tx_antennas[r]
                    )));
                }
                out.push(h);
            }
            channels.push(out);
        }
        let noise = self
            .noise
            .iter()
            .map(|rows| Ok(Hermitian::new(matrix_of(rows)?)?))
            .collect::<Result<Vec<_>, HarnessError>>()?;
        Ok(NetworkScenario::new(
            channels,
            noise,
            self.max_power.clone(),
            self.circuit_power.clone(),
            self.seed,
        )?)
    }
}

pub fn scenario_to_json(s: &NetworkScenario, generator: Option<GeneratorInfo>) -> Result<String, HarnessError> {
    Ok(json::to_string(&ScenarioFile::from_scenario(s, generator))?)
}

pub fn scenario_from_json(text: &str) -> Result<NetworkScenario, HarnessError> {
    serde_json::from_str::<ScenarioFile>(text)?.to_scenario()
}

pub fn read_scenario(path: &Path) -> Result<NetworkScenario, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    scenario_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mimo_ee_core::game::generate_scenario;

    #[test]
    fn round_trip_is_bit_exact() {
        let params = ScenarioParams {
            players: 3,
            antennas: 2,
            sir_db: f64::INFINITY,
            seed: 42,
            ..ScenarioParams::default()
        };
        let s = generate_scenario(&ScenarioParams { sir_db: -3.0, ..params.clone() }).unwrap().scenario;
        let text = scenario_to_json(&s, Some(GeneratorInfo::from(&params))).unwrap();
        let back: ScenarioFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ScenarioFile::from_scenario(&s, Some(GeneratorInfo::from(&params))));
        let s2 = back.to_scenario().unwrap();
        for q in 0..3 {
            for r in 0..3 {
                let (a, b) = (s.channel(q, r), s2.channel(q, r));
                assert!(a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| x.re.to_bits() == y.re.to_bits()
                    && x.im.to_bits() == y.im.to_bits()));
            }
        }
        assert_eq!(scenario_to_json(&s2, Some(GeneratorInfo::from(&params))).unwrap(), text);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let s = generate_scenario(&ScenarioParams {
            players: 2,
            antennas: 2,
            ..ScenarioParams::default()
        })
        .unwrap()
        .scenario;
        let mut f = ScenarioFile::from_scenario(&s, None);
        f.tx_antennas[1] = 3;
        assert!(f.to_scenario().is_err());
        let mut f = ScenarioFile::from_scenario(&s, None);
        f.noise[0][0][1] = [5.0, 0.0];
        assert!(f.to_scenario().is_err());
    }
}
