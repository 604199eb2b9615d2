//! Experiment configuration, read from JSON. Every field has a default, so
//! `{}` is a valid config describing the reference 8-player setup.

use std::fs;
use std::path::{Path, PathBuf};

use mimo_ee_core::best_response::DinkelbachConfig;
use mimo_ee_core::equilibrium::SmoothnessConfig;
use mimo_ee_core::game::{ChannelKind, ScenarioParams, SnrConvention};
use mimo_ee_core::iwfa::{IwfaConfig, ScheduleMode, StopRule};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Serde helpers for decibel values that may be infinite: written as the
/// string `"inf"`, read from a number or one of `"inf"`, `"+inf"`, `"-inf"`.
pub mod db {
    use serde::{de, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn parse(r: Repr) -> Result<f64, String> {
        match r {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.trim().to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                other => Err(format!("expected a number or \"inf\", found {other:?}")),
            },
        }
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        parse(Repr::deserialize(d)?).map_err(de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
            struct One(f64);
            impl serde::Serialize for One {
                fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                    super::serialize(&self.0, s)
                }
            }
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&One(*x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            Vec::<Repr>::deserialize(d)?
                .into_iter()
                .map(|r| parse(r).map_err(de::Error::custom))
                .collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    CriteriaSweep,
    IwfaRun,
    LemmaVerify,
    BrSolve,
}

/// Random network parameters; `sir_db` may be `"inf"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub players: usize,
    pub antennas: usize,
    pub snr_db: f64,
    #[serde(with = "db")]
    pub sir_db: f64,
    pub max_power: f64,
    pub circuit_power: f64,
    pub snr_convention: SnrConvention,
    pub channel_kind: ChannelKind,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        let p = ScenarioParams::default();
        Self {
            players: p.players,
            antennas: p.antennas,
            snr_db: p.snr_db,
            sir_db: p.sir_db,
            max_power: p.max_power,
            circuit_power: p.circuit_power,
            snr_convention: p.snr_convention,
            channel_kind: p.channel_kind,
        }
    }
}

impl ScenarioSection {
    pub fn params(&self, seed: u64) -> ScenarioParams {
        ScenarioParams {
            players: self.players,
            antennas: self.antennas,
            snr_db: self.snr_db,
            sir_db: self.sir_db,
            max_power: self.max_power,
            circuit_power: self.circuit_power,
            snr_convention: self.snr_convention,
            channel_kind: self.channel_kind,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub snr_db: Vec<f64>,
    #[serde(with = "db::vec")]
    pub sir_db: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            snr_db: vec![0.0, 5.0, 10.0, 15.0],
            sir_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriteriaSection {
    /// Sample the power-mapping modulus for every trial (slow).
    pub smoothness: Option<SmoothnessConfig>,
    /// Sample count of the interference matrix when some reduced direct
    /// channel is not square.
    pub sampled_profiles: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    Sequential,
    Synchronous,
    Asynchronous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IwfaSection {
    pub schedule: ScheduleKind,
    /// Per-slot update probability of every player in asynchronous mode.
    pub rho: f64,
    pub max_delay: usize,
    pub stop: StopRule,
    pub engine: IwfaConfig,
    /// Keep every k-th slot in trace CSVs (the last slot is always kept).
    pub trace_thinning: usize,
    /// Scenarios of the paired synchronous / asynchronous experiment.
    pub runs: usize,
}

impl Default for IwfaSection {
    fn default() -> Self {
        Self {
            schedule: ScheduleKind::Synchronous,
            rho: 0.5,
            max_delay: 3,
            stop: StopRule::default(),
            engine: IwfaConfig::default(),
            trace_thinning: 1,
            runs: 10,
        }
    }
}

impl IwfaSection {
    pub fn mode(&self, kind: ScheduleKind, players: usize) -> ScheduleMode {
        match kind {
            ScheduleKind::Sequential => ScheduleMode::Sequential,
            ScheduleKind::Synchronous => ScheduleMode::Synchronous,
            ScheduleKind::Asynchronous => ScheduleMode::Asynchronous {
                rho: vec![self.rho; players],
                max_delay: self.max_delay,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaSection {
    pub pairs: usize,
    /// SIR of the extra monotonicity check on the same channels; the bound
    /// only applies once `sr(S^s) < 1`, which the reference SIR rarely gives.
    #[serde(with = "db")]
    pub monotonicity_sir_db: f64,
    pub sqrt_q_players: Vec<usize>,
    pub sqrt_q_antennas: usize,
}

impl Default for LemmaSection {
    fn default() -> Self {
        Self {
            pairs: 500,
            monotonicity_sir_db: 30.0,
            sqrt_q_players: vec![2, 4, 8],
            sqrt_q_antennas: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<ExperimentKind>,
    pub scenario: ScenarioSection,
    /// Use this scenario instead of drawing one (single-scenario commands).
    pub scenario_file: Option<PathBuf>,
    pub grid: Grid,
    pub trials: usize,
    /// Master seed; channel and schedule seeds are derived from it.
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub dinkelbach: DinkelbachConfig,
    pub criteria: CriteriaSection,
    pub iwfa: IwfaSection,
    pub lemmas: LemmaSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: None,
            scenario: ScenarioSection::default(),
            scenario_file: None,
            grid: Grid::default(),
            trials: 200,
            seed: 0,
            out: None,
            dinkelbach: DinkelbachConfig::default(),
            criteria: CriteriaSection::default(),
            iwfa: IwfaSection::default(),
            lemmas: LemmaSection::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Invalid(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.grid.snr_db.is_empty() || self.grid.sir_db.is_empty() {
            return bad("grid axes must be non-empty");
        }
        if self.grid.snr_db.iter().chain(&self.grid.sir_db).any(|v| v.is_nan()) {
            return bad("grid values must be numbers");
        }
        if self.scenario.players == 0 || self.scenario.antennas == 0 {
            return bad("players and antennas must be at least 1");
        }
        if !(self.iwfa.rho > 0.0 && self.iwfa.rho <= 1.0) {
            return bad("iwfa.rho must lie in (0, 1]");
        }
        if self.iwfa.trace_thinning == 0 || self.iwfa.runs == 0 {
            return bad("iwfa.trace_thinning and iwfa.runs must be at least 1");
        }
        if self.lemmas.pairs == 0 {
            return bad("lemmas.pairs must be at least 1");
        }
        self.dinkelbach
            .validate()
            .map_err(|e| HarnessError::Invalid(e.to_string()))?;
        Ok(())
    }

    /// The engine config with the top-level Dinkelbach settings applied.
    pub fn engine(&self) -> IwfaConfig {
        IwfaConfig {
            dinkelbach: self.dinkelbach,
            ..self.iwfa.engine.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_the_reference_setup() {
        let cfg = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.scenario.players, 8);
        assert_eq!(cfg.grid.sir_db.len(), 7);
    }

    #[test]
    fn infinite_sir_round_trips() {
        let cfg = ExperimentConfig::from_json(r#"{"grid": {"sir_db": [0, "inf"]}, "scenario": {"sir_db": "inf"}}"#).unwrap();
        assert_eq!(cfg.grid.sir_db, vec![0.0, f64::INFINITY]);
        assert_eq!(cfg.scenario.sir_db, f64::INFINITY);
        let text = crate::json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"trials": 0}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"grid": {"snr_db": []}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"iwfa": {"rho": 0}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"unknown_field": 1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"grid": {"sir_db": ["loud"]}}"#).is_err());
    }
}
