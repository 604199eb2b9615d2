use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::IwfaError;
use crate::sampling::{rng_from_seed, SimRng};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case", tag = "mode"))]
pub enum ScheduleMode {
    /// Player `t mod Q` updates at slot `t`.
    Sequential,
    /// Everyone updates at every slot.
    Synchronous,
    /// Player `q` updates with probability `rho[q]` at each slot and sees
    /// player `r` with an age drawn uniformly from `0..=min(max_delay, t)`.
    Asynchronous { rho: Vec<f64>, max_delay: usize },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UpdateSchedule {
    mode: ScheduleMode,
    players: usize,
    seed: u64,
}

/// Who updates at one slot and how old each of their measurements is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotPlan {
    pub updates: Vec<bool>,
    /// `delays[q][r] = t - tau_r^q(t)`; zero on the diagonal and for players
    /// that do not update.
    pub delays: Vec<Vec<usize>>,
}

pub fn make_schedule(mode: ScheduleMode, players: usize, seed: u64) -> Result<UpdateSchedule, IwfaError> {
    if players == 0 {
        return Err(IwfaError::InvalidSchedule("at least one player required"));
    }
    if let ScheduleMode::Asynchronous { rho, .. } = &mode {
        if rho.len() != players {
            return Err(IwfaError::InvalidSchedule("one update probability per player required"));
        }
        if rho.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(IwfaError::InvalidSchedule("update probabilities must lie in (0, 1]"));
        }
    }
    Ok(UpdateSchedule { mode, players, seed })
}

impl UpdateSchedule {
    pub fn mode(&self) -> &ScheduleMode {
        &self.mode
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn max_delay(&self) -> usize {
        match self.mode {
            ScheduleMode::Asynchronous { max_delay, .. } => max_delay,
            _ => 0,
        }
    }

    /// Fresh iterator over slot plans; two calls yield identical sequences.
    pub fn plans(&self) -> SlotPlans<'_> {
        SlotPlans {
            schedule: self,
            rng: rng_from_seed(self.seed),
            t: 0,
        }
    }
}

pub struct SlotPlans<'a> {
    schedule: &'a UpdateSchedule,
    rng: SimRng,
    t: usize,
}

impl Iterator for SlotPlans<'_> {
    type Item = SlotPlan;

    fn next(&mut self) -> Option<SlotPlan> {
        let n = self.schedule.players;
        let t = self.t;
        self.t += 1;
        let mut delays = vec![vec![0; n]; n];
        let updates = match &self.schedule.mode {
            ScheduleMode::Sequential => (0..n).map(|q| q == t % n).collect(),
            ScheduleMode::Synchronous => vec![true; n],
            ScheduleMode::Asynchronous { rho, max_delay } => {
                let cap = (*max_delay).min(t);
                let updates: Vec<bool> = rho.iter().map(|&p| self.rng.random::<f64>() < p).collect();
                for q in (0..n).filter(|&q| updates[q]) {
                    for r in (0..n).filter(|&r| r != q) {
                        delays[q][r] = self.rng.random_range(0..=cap);
                    }
                }
                updates
            }
        };
        Some(SlotPlan { updates, delays })
    }
}
