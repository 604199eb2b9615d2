//! IWFA runs: a single configured run, and the paired synchronous /
//! asynchronous experiment over several scenarios.

use std::io;

use mimo_ee_core::game::{generate_scenario, ReducedScenario};
use mimo_ee_core::iwfa::{make_schedule, run_iwfa, IwfaTrace, TerminationReason};
use mimo_ee_core::sampling::derive_seed;
use mimo_ee_core::{NetworkScenario, StrategyProfile};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ScheduleKind};
use crate::scenario_file::read_scenario;
use crate::HarnessError;

pub const CONVERGENCE_SCHEMA: &str = "mimo-ee convergence v1";

/// The scenario of single-scenario commands: the configured file, or a draw
/// with the master seed itself.
pub fn configured_scenario(cfg: &ExperimentConfig) -> Result<NetworkScenario, HarnessError> {
    match &cfg.scenario_file {
        Some(path) => read_scenario(path),
        None => Ok(generate_scenario(&cfg.scenario.params(cfg.seed))?.scenario),
    }
}

pub fn run_one(
    s: &ReducedScenario,
    cfg: &ExperimentConfig,
    kind: ScheduleKind,
    schedule_seed: u64,
) -> Result<IwfaTrace, HarnessError> {
    let schedule = make_schedule(cfg.iwfa.mode(kind, s.players()), s.players(), schedule_seed)?;
    Ok(run_iwfa(s, &schedule, &StrategyProfile::uniform(s), &cfg.iwfa.stop, &cfg.engine())?)
}

/// `iwfa run`: the configured schedule on the configured scenario.
pub fn run_single(cfg: &ExperimentConfig) -> Result<(ReducedScenario, IwfaTrace), HarnessError> {
    cfg.validate()?;
    let s = configured_scenario(cfg)?.reduce()?;
    let trace = run_one(&s, cfg, cfg.iwfa.schedule, derive_seed(cfg.seed, &[1]))?;
    Ok((s, trace))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub sir_db: f64,
    pub mode: String,
    /// `converged`, `max-slots`, `oscillating`, `failed` or `error`.
    pub label: String,
    pub period: Option<usize>,
    pub slots: usize,
    pub final_block_residual: Option<f64>,
    pub final_ne_residual: Option<f64>,
    pub min_ee: Option<f64>,
    pub sum_ee: Option<f64>,
    /// Final per-player EE, `;`-separated.
    pub final_ee: String,
    /// Block-max distance between the synchronous and asynchronous endpoints.
    pub endpoint_distance: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct PairedRun {
    pub run: usize,
    pub seed: u64,
    pub synchronous: Result<IwfaTrace, String>,
    pub asynchronous: Result<IwfaTrace, String>,
    pub endpoint_distance: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceResult {
    pub runs: Vec<PairedRun>,
}

impl ConvergenceResult {
    pub fn records(&self, sir_db: f64) -> Vec<RunRecord> {
        self.runs
            .iter()
            .flat_map(|p| {
                [("synchronous", &p.synchronous), ("asynchronous", &p.asynchronous)]
                    .into_iter()
                    .map(move |(mode, t)| record(p, sir_db, mode, t))
            })
            .collect()
    }
}

fn record(p: &PairedRun, sir_db: f64, mode: &str, t: &Result<IwfaTrace, String>) -> RunRecord {
    let mut r = RunRecord {
        run: p.run,
        seed: p.seed,
        sir_db,
        mode: mode.to_string(),
        label: "error".into(),
        period: None,
        slots: 0,
        final_block_residual: None,
        final_ne_residual: None,
        min_ee: None,
        sum_ee: None,
        final_ee: String::new(),
        endpoint_distance: p.endpoint_distance,
        error: None,
    };
    let t = match t {
        Ok(t) => t,
        Err(e) => {
            r.error = Some(e.clone());
            return r;
        }
    };
    let (label, period, error) = match &t.termination {
        TerminationReason::Converged { .. } => ("converged", None, None),
        TerminationReason::MaxSlots => ("max-slots", None, None),
        TerminationReason::Oscillating { period, .. } => ("oscillating", Some(*period), None),
        TerminationReason::Failed { error, .. } => ("failed", None, Some(error.clone())),
    };
    let ee = t.records.last().map_or(&t.initial_ee, |rec| &rec.ee);
    RunRecord {
        label: label.into(),
        period,
        slots: t.slots(),
        final_block_residual: t.records.last().map(|rec| rec.block_residual),
        final_ne_residual: t.final_ne_residual,
        min_ee: ee.iter().cloned().reduce(f64::min),
        sum_ee: Some(ee.iter().sum()),
        final_ee: ee.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"),
        error,
        ..r
    }
}

/// Paired synchronous and asynchronous runs on `iwfa.runs` scenarios drawn
/// from `derive_seed(seed, [run])`; failures are recorded per run.
pub fn run_convergence_experiment(cfg: &ExperimentConfig) -> Result<ConvergenceResult, HarnessError> {
    cfg.validate()?;
    let runs = (0..cfg.iwfa.runs)
        .into_par_iter()
        .map(|run| {
            let seed = derive_seed(cfg.seed, &[run as u64]);
            let sched_seed = derive_seed(seed, &[1]);
            let scenario = generate_scenario(&cfg.scenario.params(seed))
                .map_err(HarnessError::from)
                .and_then(|g| Ok(g.scenario.reduce()?));
            let go = |kind| match &scenario {
                Ok(s) => run_one(s, cfg, kind, sched_seed).map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            };
            let synchronous = go(ScheduleKind::Synchronous);
            let asynchronous = go(ScheduleKind::Asynchronous);
            let endpoint_distance = match (&synchronous, &asynchronous) {
                (Ok(a), Ok(b)) => Some(a.final_profile.block_max_distance(&b.final_profile, &a.weights)),
                _ => None,
            };
            PairedRun {
                run,
                seed,
                synchronous,
                asynchronous,
                endpoint_distance,
            }
        })
        .collect();
    Ok(ConvergenceResult { runs })
}

pub fn write_records_csv<W: io::Write>(mut w: W, cfg: &ExperimentConfig, records: &[RunRecord]) -> Result<(), HarnessError> {
    let s = &cfg.scenario;
    writeln!(
        w,
        "# {CONVERGENCE_SCHEMA}; players={}; antennas={}; snr_db={}; max_power={}; circuit_power={}; residual_tol={}; max_slots={}; rho={}; max_delay={}; seed={}",
        s.players,
        s.antennas,
        s.snr_db,
        s.max_power,
        s.circuit_power,
        cfg.iwfa.stop.residual_tol,
        cfg.iwfa.stop.max_slots,
        cfg.iwfa.rho,
        cfg.iwfa.max_delay,
        cfg.seed
    )?;
    let mut csv = csv::Writer::from_writer(w);
    for r in records {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_records_csv<R: io::Read>(r: R) -> Result<Vec<RunRecord>, HarnessError> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    Ok(rd.deserialize().collect::<Result<Vec<RunRecord>, _>>()?)
}
