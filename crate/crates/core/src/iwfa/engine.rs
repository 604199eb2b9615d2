use alloc::collections::VecDeque;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{IwfaError, UpdateSchedule};
use crate::best_response::{best_response, best_response_given_mui, DinkelbachConfig};
use crate::equilibrium::{criteria_from_matrix, interference_matrix_square};
use crate::game::{ReducedScenario, StrategyProfile};
use crate::linalg::Hermitian;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct StopRule {
    pub max_slots: usize,
    /// Threshold on the weighted block-max residual `r(t)`.
    pub residual_tol: f64,
    /// Consecutive slots `r(t)` must stay below the threshold.
    pub window: usize,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            max_slots: 2000,
            residual_tol: 1e-8,
            window: 5,
        }
    }
}

/// Block weights `w_q` of the residual norm.
#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum WeightChoice {
    /// Perron vector of the interference matrix, scaled to a unit maximum;
    /// all ones when some reduced direct channel is not square.
    #[default]
    Perron,
    Ones,
    Custom(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct OscillationConfig {
    pub window: usize,
    pub max_period: usize,
    /// Relative tolerance for `r(t) = r(t - k)`.
    pub rel_tol: f64,
    /// A least-squares slope of `ln r` below `-trend_tol` per slot counts as
    /// a downward trend.
    pub trend_tol: f64,
}

impl Default for OscillationConfig {
    fn default() -> Self {
        Self {
            window: 50,
            max_period: 8,
            rel_tol: 1e-4,
            trend_tol: 1e-5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct IwfaConfig {
    pub dinkelbach: DinkelbachConfig,
    pub weights: WeightChoice,
    /// Evaluate the NE residual every this many slots; 0 keeps only the final one.
    pub ne_stride: usize,
    /// Store the profile every this many slots; 0 stores none.
    pub snapshot_stride: usize,
    /// `None` disables the oscillation label.
    pub oscillation: Option<OscillationConfig>,
}

impl Default for IwfaConfig {
    fn default() -> Self {
        Self {
            dinkelbach: DinkelbachConfig::default(),
            weights: WeightChoice::Perron,
            ne_stride: 1,
            snapshot_stride: 0,
            oscillation: Some(OscillationConfig::default()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case", tag = "reason"))]
pub enum TerminationReason {
    Converged { slot: usize },
    MaxSlots,
    Oscillating { slot: usize, period: usize },
    Failed { slot: usize, error: String },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlotRecord {
    pub slot: usize,
    pub ee: Vec<f64>,
    pub updated: Vec<bool>,
    /// `max_q ||Q_q(t) - Q_q(t-1)||_F / w_q`.
    pub block_residual: f64,
    pub ne_residual: Option<f64>,
    pub snapshot: Option<StrategyProfile>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IwfaTrace {
    pub weights: Vec<f64>,
    pub initial_ee: Vec<f64>,
    /// Slot `t` holds the profile after the `t`-th update step, from 1.
    pub records: Vec<SlotRecord>,
    pub final_profile: StrategyProfile,
    pub final_ne_residual: Option<f64>,
    pub termination: TerminationReason,
}

impl IwfaTrace {
    pub fn converged(&self) -> bool {
        matches!(self.termination, TerminationReason::Converged { .. })
    }

    pub fn oscillating(&self) -> bool {
        matches!(self.termination, TerminationReason::Oscillating { .. })
    }

    pub fn slots(&self) -> usize {
        self.records.len()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.block_residual).collect()
    }
}

/// `max_q ||Q_q - BR_q(Q_-q)||_F`.
pub fn ne_residual(s: &ReducedScenario, profile: &StrategyProfile, cfg: &DinkelbachConfig) -> Result<f64, IwfaError> {
    let mut worst = 0.0f64;
    for q in 0..s.players() {
        let br = best_response(s, q, profile, cfg)?;
        worst = worst.max(br.covariance.sub_h(profile.get(q)).frobenius_norm());
    }
    Ok(worst)
}

fn resolve_weights(s: &ReducedScenario, choice: &WeightChoice) -> Result<Vec<f64>, IwfaError> {
    let n = s.players();
    let w = match choice {
        WeightChoice::Ones => vec![1.0; n],
        WeightChoice::Custom(w) => w.clone(),
        WeightChoice::Perron if !s.all_direct_square() => vec![1.0; n],
        WeightChoice::Perron => {
            let w = criteria_from_matrix(&interference_matrix_square(s)?.matrix)
                .map_err(|e| IwfaError::Equilibrium(e.into()))?
                .perron_w;
            let top = w.iter().cloned().fold(0.0, f64::max);
            w.iter().map(|x| x / top).collect()
        }
    };
    if w.len() != n || w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(IwfaError::InvalidConfig("one positive weight per player required"));
    }
    Ok(w)
}

/// Period `k <= max_period` of the last `window` residuals, if they recur
/// within `rel_tol`, stay above `floor` and show no downward trend.
pub fn detect_oscillation(residuals: &[f64], floor: f64, cfg: &OscillationConfig) -> Option<usize> {
    let w = cfg.window;
    if w < 2 || residuals.len() < w {
        return None;
    }
    let tail = &residuals[residuals.len() - w..];
    if tail.iter().any(|&r| !(r > floor) || !r.is_finite()) {
        return None;
    }
    let logs: Vec<f64> = tail.iter().map(|r| r.ln()).collect();
    let mean_x = (w - 1) as f64 / 2.0;
    let mean_y = logs.iter().sum::<f64>() / w as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in logs.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    if sxy / sxx < -cfg.trend_tol {
        return None;
    }
    (1..=cfg.max_period.min(w - 1)).find(|&k| {
        (k..w).all(|j| (tail[j] - tail[j - k]).abs() <= cfg.rel_tol * tail[j].max(tail[j - k]))
    })
}

fn delayed_mui(
    s: &ReducedScenario,
    q: usize,
    history: &VecDeque<StrategyProfile>,
    delays: &[usize],
) -> Hermitian {
    let newest = history.len() - 1;
    let mut acc = s.noise(q).clone();
    for r in (0..s.players()).filter(|&r| r != q) {
        let cov = history[newest - delays[r]].get(r);
        acc = acc.add_h(&cov.congruence_by(s.hbar(q, r)).expect("rank-sized covariance"));
    }
    acc
}

pub fn run_iwfa(
    s: &ReducedScenario,
    schedule: &UpdateSchedule,
    init: &StrategyProfile,
    stop: &StopRule,
    cfg: &IwfaConfig,
) -> Result<IwfaTrace, IwfaError> {
    let n = s.players();
    if schedule.players() != n {
        return Err(IwfaError::InvalidSchedule("schedule and scenario disagree on the player count"));
    }
    if stop.max_slots == 0 || stop.window == 0 || !(stop.residual_tol >= 0.0) {
        return Err(IwfaError::InvalidConfig("max_slots and window must be positive, tolerance nonnegative"));
    }
    cfg.dinkelbach.validate()?;
    init.validate(s)?;
    let weights = resolve_weights(s, &cfg.weights)?;

    let depth = schedule.max_delay() + 1;
    let mut history: VecDeque<StrategyProfile> = VecDeque::with_capacity(depth + 1);
    history.push_back(init.clone());
    let initial_ee = s.energy_efficiencies(init)?;
    let mut records: Vec<SlotRecord> = Vec::new();
    let mut residuals = Vec::new();
    let mut streak = 0usize;
    let mut seen = vec![false; n];
    let mut termination = TerminationReason::MaxSlots;

    'slots: for (t, plan) in schedule.plans().take(stop.max_slots).enumerate() {
        let slot = t + 1;
        let current = history.back().expect("history is never empty");
        let mut next = current.clone();
        for q in (0..n).filter(|&q| plan.updates[q]) {
            let mui = delayed_mui(s, q, &history, &plan.delays[q]);
            match best_response_given_mui(s, q, &mui, &cfg.dinkelbach) {
                Ok(br) => next.set(q, br.covariance),
                Err(e) => {
                    termination = TerminationReason::Failed {
                        slot,
                        error: e.to_string(),
                    };
                    break 'slots;
                }
            }
        }
        let residual = next.block_max_distance(current, &weights);
        let ee = match s.energy_efficiencies(&next) {
            Ok(ee) => ee,
            Err(e) => {
                termination = TerminationReason::Failed {
                    slot,
                    error: e.to_string(),
                };
                break;
            }
        };
        let ne = if cfg.ne_stride > 0 && slot % cfg.ne_stride == 0 {
            ne_residual(s, &next, &cfg.dinkelbach).ok()
        } else {
            None
        };
        let snapshot = (cfg.snapshot_stride > 0 && slot % cfg.snapshot_stride == 0).then(|| next.clone());
        records.push(SlotRecord {
            slot,
            ee,
            updated: plan.updates.clone(),
            block_residual: residual,
            ne_residual: ne,
            snapshot,
        });
        residuals.push(residual);
        history.push_back(next);
        if history.len() > depth {
            history.pop_front();
        }

        if residual <= stop.residual_tol {
            streak += 1;
            for (flag, &u) in seen.iter_mut().zip(&plan.updates) {
                *flag |= u;
            }
        } else {
            streak = 0;
            seen.iter_mut().for_each(|f| *f = false);
        }
        // Every player must have updated inside the streak, otherwise idle
        // slots of an asynchronous schedule would count as agreement.
        if streak >= stop.window && seen.iter().all(|&f| f) {
            termination = TerminationReason::Converged { slot };
            break;
        }
        if let Some(osc) = &cfg.oscillation {
            if let Some(period) = detect_oscillation(&residuals, stop.residual_tol, osc) {
                termination = TerminationReason::Oscillating { slot, period };
                break;
            }
        }
    }

    let final_profile = history.pop_back().expect("history is never empty");
    let final_ne_residual = ne_residual(s, &final_profile, &cfg.dinkelbach).ok();
    Ok(IwfaTrace {
        weights,
        initial_ee,
        records,
        final_profile,
        final_ne_residual,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{generate_scenario, NetworkScenario, ScenarioParams};
    use crate::iwfa::{make_schedule, ScheduleMode};
    use crate::linalg::CMatrix;

    fn scenario(players: usize, antennas: usize, sir_db: f64, seed: u64) -> ReducedScenario {
        generate_scenario(&ScenarioParams {
            players,
            antennas,
            sir_db,
            seed,
            ..ScenarioParams::default()
        })
        .unwrap()
        .scenario
        .reduce()
        .unwrap()
    }

    fn run(s: &ReducedScenario, mode: ScheduleMode, seed: u64) -> IwfaTrace {
        let sched = make_schedule(mode, s.players(), seed).unwrap();
        run_iwfa(s, &sched, &StrategyProfile::uniform(s), &StopRule::default(), &IwfaConfig::default()).unwrap()
    }

    #[test]
    fn single_player_converges_after_one_update() {
        let s = scenario(1, 3, 0.0, 2);
        let trace = run(&s, ScheduleMode::Synchronous, 0);
        assert_eq!(trace.termination, TerminationReason::Converged { slot: 6 });
        assert!(trace.records[1..].iter().all(|r| r.block_residual == 0.0));
        assert!(trace.final_ne_residual.unwrap() <= 1e-8);
    }

    #[test]
    fn decoupled_game_converges_in_one_sweep() {
        let s = scenario(4, 2, f64::INFINITY, 3);
        let trace = run(&s, ScheduleMode::Synchronous, 0);
        assert!(trace.converged());
        assert!(trace.records[0].block_residual > 0.0);
        assert!(trace.records[1..].iter().all(|r| r.block_residual <= 1e-9));
    }

    #[test]
    fn all_schedules_reach_the_same_point() {
        let s = scenario(3, 2, 10.0, 5);
        let sync = run(&s, ScheduleMode::Synchronous, 0);
        let seq = run(&s, ScheduleMode::Sequential, 0);
        let asyn = run(
            &s,
            ScheduleMode::Asynchronous {
                rho: vec![0.5; 3],
                max_delay: 3,
            },
            9,
        );
        for t in [&sync, &seq, &asyn] {
            assert!(t.converged(), "{:?}", t.termination);
            assert!(t.final_ne_residual.unwrap() <= 1e-6);
        }
        let ones = [1.0; 3];
        assert!(sync.final_profile.block_max_distance(&seq.final_profile, &ones) <= 1e-4);
        assert!(sync.final_profile.block_max_distance(&asyn.final_profile, &ones) <= 1e-4);
        assert!(seq.slots() > sync.slots());
    }

    #[test]
    fn identical_seeds_give_identical_traces() {
        let s = scenario(3, 2, 0.0, 7);
        let mode = ScheduleMode::Asynchronous {
            rho: vec![0.4; 3],
            max_delay: 2,
        };
        assert_eq!(run(&s, mode.clone(), 4), run(&s, mode, 4));
    }

    #[test]
    fn best_response_failure_is_recorded() {
        let s = scenario(2, 2, 0.0, 1);
        let sched = make_schedule(ScheduleMode::Synchronous, 2, 0).unwrap();
        let cfg = IwfaConfig {
            dinkelbach: DinkelbachConfig {
                max_iters: 1,
                ..DinkelbachConfig::default()
            },
            ..IwfaConfig::default()
        };
        let trace = run_iwfa(&s, &sched, &StrategyProfile::uniform(&s), &StopRule::default(), &cfg).unwrap();
        assert!(matches!(trace.termination, TerminationReason::Failed { slot: 1, .. }));
        assert!(trace.records.is_empty());
    }

    #[test]
    fn rejects_infeasible_start() {
        let s = scenario(2, 2, 0.0, 1);
        let sched = make_schedule(ScheduleMode::Synchronous, 2, 0).unwrap();
        let mut init = StrategyProfile::uniform(&s);
        init.set(0, Hermitian::identity(2).scale_h(10.0));
        assert!(run_iwfa(&s, &sched, &init, &StopRule::default(), &IwfaConfig::default()).is_err());
    }

    #[test]
    fn oscillation_detector() {
        let cfg = OscillationConfig::default();
        let two_cycle: Vec<f64> = (0..60).map(|i| if i % 2 == 0 { 0.3 } else { 0.7 }).collect();
        assert_eq!(detect_oscillation(&two_cycle, 1e-8, &cfg), Some(2));
        let constant = vec![0.5; 60];
        assert_eq!(detect_oscillation(&constant, 1e-8, &cfg), Some(1));
        let decaying: Vec<f64> = (0..60).map(|i| 0.9f64.powi(i)).collect();
        assert_eq!(detect_oscillation(&decaying, 1e-8, &cfg), None);
        let below_floor = vec![1e-10; 60];
        assert_eq!(detect_oscillation(&below_floor, 1e-8, &cfg), None);
        let period_nine: Vec<f64> = (0..60).map(|i| 1.0 + (i % 9) as f64).collect();
        assert_eq!(detect_oscillation(&period_nine, 1e-8, &cfg), None);
        assert_eq!(detect_oscillation(&two_cycle[..49], 1e-8, &cfg), None);
    }

    #[test]
    fn ne_residual_positive_away_from_equilibrium() {
        let s = scenario(3, 2, -10.0, 2);
        let r = ne_residual(&s, &StrategyProfile::uniform(&s), &DinkelbachConfig::default()).unwrap();
        assert!(r > 1e-3);
    }

    #[test]
    fn single_player_optimum_has_tiny_residual() {
        let net = NetworkScenario::new(
            vec![vec![CMatrix::identity(2)]],
            vec![Hermitian::identity(2)],
            vec![4.0],
            vec![1.0],
            0,
        )
        .unwrap();
        let s = net.reduce().unwrap();
        let cfg = DinkelbachConfig::default();
        let br = best_response(&s, 0, &StrategyProfile::zeros(&s), &cfg).unwrap();
        let p = StrategyProfile::new(vec![br.covariance]);
        assert!(ne_residual(&s, &p, &cfg).unwrap() <= 10.0 * cfg.epsilon);
    }
}
