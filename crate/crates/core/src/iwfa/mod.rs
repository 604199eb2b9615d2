//! The totally asynchronous EE iterative waterfilling algorithm.
//!
//! At every slot the players selected by an [`UpdateSchedule`] replace their
//! covariance by the EE best response to possibly outdated strategies of the
//! others; everyone else holds.

mod engine;
mod schedule;

pub use engine::{
    detect_oscillation, ne_residual, run_iwfa, IwfaConfig, IwfaTrace, OscillationConfig, SlotRecord, StopRule,
    TerminationReason, WeightChoice,
};
pub use schedule::{make_schedule, ScheduleMode, SlotPlan, SlotPlans, UpdateSchedule};

use thiserror::Error;

use crate::best_response::BrError;
use crate::equilibrium::EquilibriumError;
use crate::game::ScenarioError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IwfaError {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    BestResponse(#[from] BrError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}
