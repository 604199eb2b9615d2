//! Sampled checks of the Lipschitz, strong monotonicity and power-set bounds,
//! plus the identity-channel `sqrt(Q)` construction.

use mimo_ee_core::equilibrium::{
    sqrt_q_construction, verify_lipschitz, verify_monotonicity, verify_power_set_smoothness, LemmaReport, LemmaStatus,
};
use mimo_ee_core::game::generate_scenario;
use mimo_ee_core::sampling::derive_seed;
use serde::Serialize;

use crate::config::{db, ExperimentConfig};
use crate::convergence::configured_scenario;
use crate::HarnessError;

#[derive(Clone, Debug, Serialize)]
pub struct LabeledReport {
    /// What was sampled, e.g. `configured` or `sir=30` or `Q=4`.
    pub target: String,
    #[serde(flatten)]
    pub report: LemmaReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaSuiteReport {
    pub schema: &'static str,
    pub seed: u64,
    pub pairs: usize,
    #[serde(with = "db")]
    pub monotonicity_sir_db: f64,
    pub reports: Vec<LabeledReport>,
    pub passed: bool,
}

pub fn run_lemma_suite(cfg: &ExperimentConfig) -> Result<LemmaSuiteReport, HarnessError> {
    cfg.validate()?;
    let n = cfg.lemmas.pairs;
    let net = configured_scenario(cfg)?;
    let s = net.reduce()?;
    let seed = |k: u64| derive_seed(cfg.seed, &[100 + k]);
    let label = |target: &str, report| LabeledReport {
        target: target.to_string(),
        report,
    };
    let mut reports = vec![
        label("configured", verify_lipschitz(&s, n, seed(0))?),
        label("configured", verify_monotonicity(&s, n, seed(1))?),
        label("configured", verify_power_set_smoothness(&s, n, seed(2))?),
    ];
    // The monotonicity constant is only positive once sr(S^s) < 1; repeat the
    // check on the same channels with weaker interference.
    if cfg.scenario_file.is_none() {
        let weak = generate_scenario(&mimo_ee_core::game::ScenarioParams {
            sir_db: cfg.lemmas.monotonicity_sir_db,
            ..cfg.scenario.params(cfg.seed)
        })?
        .scenario
        .reduce()?;
        reports.push(label(
            &format!("sir={}", cfg.lemmas.monotonicity_sir_db),
            verify_monotonicity(&weak, n, seed(3))?,
        ));
    }
    for (k, &q) in cfg.lemmas.sqrt_q_players.iter().enumerate() {
        reports.push(label(
            &format!("Q={q}"),
            sqrt_q_construction(q, cfg.lemmas.sqrt_q_antennas, seed(10 + k as u64))?,
        ));
    }
    let passed = reports.iter().all(|r| r.report.status == LemmaStatus::Passed);
    Ok(LemmaSuiteReport {
        schema: "mimo-ee lemma-suite v1",
        seed: cfg.seed,
        pairs: n,
        monotonicity_sir_db: cfg.lemmas.monotonicity_sir_db,
        reports,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_interference_passes_everything() {
        let mut cfg = ExperimentConfig::default();
        cfg.scenario.players = 3;
        cfg.scenario.antennas = 2;
        cfg.scenario.sir_db = f64::INFINITY;
        cfg.lemmas.pairs = 40;
        let r = run_lemma_suite(&cfg).unwrap();
        assert!(r.passed);
        assert!(r.reports.iter().all(|x| x.report.status == LemmaStatus::Passed));
        assert_eq!(r.reports.len(), 7);
        let text = crate::json::to_string(&r).unwrap();
        assert!(text.contains("\"passed\": true"));
    }
}
