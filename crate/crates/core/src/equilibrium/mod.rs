//! Uniqueness criteria for the Nash equilibrium and numerical checks of the
//! bounds they rest on.
//!
//! The interference matrix `S` has entries `sigma_max^2(Hbar_qq^-1 Hbar_qr)`.
//! The QVI route needs `sr(S^s) < 1` with `S^s = (S + S^T) / 2`, the
//! contraction route needs `sr(S) < 1`; both also need the power mapping to
//! be smooth enough, which is only estimated here by sampling.

mod criteria;
mod interference;
mod lemmas;
mod qvi;
mod smoothness;

pub use criteria::{criteria, criteria_from_matrix, CriteriaReport};
pub use interference::{
    interference_matrix_rowrank, interference_matrix_sampled, interference_matrix_square,
    rowrank_unfactored_bound, InterferenceMatrix, InterferenceVariant,
};
pub use lemmas::{
    sqrt_q_construction, verify_lipschitz, verify_monotonicity, verify_power_set_smoothness, Lemma,
    LemmaReport, LemmaStatus, Witness, LEMMA_SLACK,
};
pub use qvi::{qvi_map, QviOperator};
pub use smoothness::{estimate_power_smoothness, PowerSmoothness, SmoothnessConfig};

use thiserror::Error;

use crate::best_response::BrError;
use crate::game::ScenarioError;
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error("reduced direct channel of player {0} is not square and nonsingular; use the sampled interference matrix")]
    NonSquareDirect(usize),
    #[error("direct channel of player {0} does not have full row rank")]
    RowRankDeficient(usize),
    #[error("whitened direct channel of player {0} lost column rank at a sample")]
    RankLoss(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    BestResponse(#[from] BrError),
}
