//! Network scenarios, the rank-reduced game and per-player utilities.

mod generate;
mod profile;
mod reduced;
mod scenario;

pub use generate::{generate_scenario, ChannelKind, Generated, ScenarioParams, SnrConvention};
pub use profile::StrategyProfile;
pub use reduced::ReducedScenario;
pub use scenario::NetworkScenario;

use thiserror::Error;

use crate::linalg::{hermitian_evd, CMatrix, Hermitian, LinalgError};

/// Slack allowed on the PSD and power-budget checks of a profile.
pub const FEASIBILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("scenario needs at least one player")]
    NoPlayers,
    #[error("expected {expected} entries for per-player field `{field}`, got {found}")]
    PlayerCount {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("channel H[{q}][{r}] is {found:?}, expected {expected:?}")]
    ChannelShape {
        q: usize,
        r: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("noise covariance of player {0} has the wrong dimension")]
    NoiseShape(usize),
    #[error("noise covariance of player {0} is not positive definite")]
    NoiseNotPositiveDefinite(usize),
    #[error("max power of player {0} must be positive and finite")]
    InvalidMaxPower(usize),
    #[error("circuit power of player {0} must be positive and finite")]
    InvalidCircuitPower(usize),
    #[error("direct channel of player {0} is zero")]
    ZeroDirectChannel(usize),
    #[error("MUI covariance of player {0} is numerically singular")]
    SingularMui(usize),
    #[error("profile has {found} players, scenario has {expected}")]
    ProfileLength { expected: usize, found: usize },
    #[error("covariance of player {q} is {found}x{found}, expected {expected}x{expected}")]
    ProfileShape {
        q: usize,
        expected: usize,
        found: usize,
    },
    #[error("covariance of player {q} is not PSD (min eigenvalue {min_eig:e})")]
    ProfileNotPsd { q: usize, min_eig: f64 },
    #[error("covariance of player {q} uses power {trace} > budget {budget}")]
    ProfileOverBudget { q: usize, trace: f64, budget: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `ln det(I + W Q W^H)` from the eigenvalues of the Hermitian product;
/// tiny negative eigenvalues from rounding are clipped.
pub(crate) fn log_det_i_plus(w: &CMatrix, q: &Hermitian) -> f64 {
    let m = q.congruence_by(w).expect("shapes checked by caller");
    hermitian_evd(&m)
        .values
        .iter()
        .map(|&l| num_traits::Float::ln_1p(l.max(0.0)))
        .sum()
}
