//! Energy-efficient best responses.
//!
//! For fixed interference the EE-optimal covariance is found in two steps:
//! the Dinkelbach method gives the power `p_u` that maximizes EE without a
//! budget, the budget clips it to `p_hat = min(P, p_u)`, and waterfilling on
//! the eigenmodes of `Hbar_qq^H R^-1 Hbar_qq` distributes `p_hat`.

mod dinkelbach;
mod waterfill;

pub use dinkelbach::{dinkelbach_gains, dinkelbach_power, DinkelbachOutcome};
pub use waterfill::{waterfill, Waterfill};

use alloc::vec::Vec;

use thiserror::Error;

use crate::game::{ReducedScenario, ScenarioError, StrategyProfile};
use crate::linalg::{hermitian_evd, psd_trace_projection, Cholesky, Hermitian, HermitianEigen, LinalgError};

/// Eigen-gains below this fraction of the largest gain are treated as dead
/// modes (their waterfilling floor would be astronomically high anyway).
const GAIN_FLOOR: f64 = 1e-13;

/// Start of the Dinkelbach iteration.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DinkelbachInit {
    /// `(P_q / r_q) I`.
    #[default]
    UniformBudget,
    /// `(power / r_q) I`.
    Uniform { power: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct DinkelbachConfig {
    pub epsilon: f64,
    pub max_iters: usize,
    pub init: DinkelbachInit,
}

impl Default for DinkelbachConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-9,
            max_iters: 200,
            init: DinkelbachInit::UniformBudget,
        }
    }
}

impl DinkelbachConfig {
    pub fn validate(&self) -> Result<(), BrError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(BrError::InvalidConfig("epsilon must be positive and finite"));
        }
        if self.max_iters == 0 {
            return Err(BrError::InvalidConfig("max_iters must be at least 1"));
        }
        if let DinkelbachInit::Uniform { power } = self.init {
            if !(power > 0.0 && power.is_finite()) {
                return Err(BrError::InvalidConfig("initial power must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BrError {
    #[error("Dinkelbach did not converge in {iterations} iterations (last gap {delta:e})")]
    NotConverged { delta: f64, iterations: usize },
    #[error("Dinkelbach parameter decreased at iteration {iteration}: {previous} -> {current}")]
    NonMonotone {
        iteration: usize,
        previous: f64,
        current: f64,
    },
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error("invalid Dinkelbach configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Best response of one player to a fixed interference level.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BestResponse {
    pub covariance: Hermitian,
    pub p_unconstrained: f64,
    pub p_hat: f64,
    /// Water level `mu` of the final waterfilling.
    pub water_level: f64,
    pub dinkelbach_iters: usize,
    pub energy_efficiency: f64,
    /// Set when no eigenmode has positive gain; the response is then zero.
    pub degenerate: bool,
}

/// Best response computed from the whitened gram `Hbar^H R^-1 Hbar` alone.
pub fn best_response_from_gram(
    gram: &Hermitian,
    max_power: f64,
    circuit_power: f64,
    cfg: &DinkelbachConfig,
) -> Result<BestResponse, BrError> {
    cfg.validate()?;
    let r = gram.dim();
    let (eig, active) = active_modes(gram);
    if active == 0 {
        return Ok(BestResponse {
            covariance: Hermitian::zeros(r),
            p_unconstrained: 0.0,
            p_hat: 0.0,
            water_level: 0.0,
            dinkelbach_iters: 0,
            energy_efficiency: 0.0,
            degenerate: true,
        });
    }
    let gains = &eig.values[..active];
    let init_per_mode = initial_power(cfg, max_power) / r as f64;
    let dk = dinkelbach_gains(gains, circuit_power, init_per_mode, cfg)?;
    let p_hat = max_power.min(dk.power);
    let u = eig.vectors.leading_columns(active);
    let wf = waterfill(&u, gains, p_hat)?;
    let rate: f64 = gains
        .iter()
        .zip(&wf.powers)
        .map(|(d, p)| num_traits::Float::ln_1p(d * p))
        .sum();
    Ok(BestResponse {
        covariance: wf.covariance,
        p_unconstrained: dk.power,
        p_hat,
        water_level: wf.level,
        dinkelbach_iters: dk.iterations,
        energy_efficiency: rate / (circuit_power + p_hat),
        degenerate: false,
    })
}

/// Eigendecomposition of the gram and the number of leading modes with
/// usable gain.
pub(crate) fn active_modes(gram: &Hermitian) -> (HermitianEigen, usize) {
    let eig = hermitian_evd(gram);
    let d_max = eig.max_value();
    let active = eig
        .values
        .iter()
        .take_while(|&&d| d > 0.0 && d > GAIN_FLOOR * d_max)
        .count();
    (eig, active)
}

fn initial_power(cfg: &DinkelbachConfig, max_power: f64) -> f64 {
    match cfg.init {
        DinkelbachInit::UniformBudget => max_power,
        DinkelbachInit::Uniform { power } => power,
    }
}

/// Best response of player `q` when its MUI-plus-noise covariance is `mui`.
pub fn best_response_given_mui(
    s: &ReducedScenario,
    q: usize,
    mui: &Hermitian,
    cfg: &DinkelbachConfig,
) -> Result<BestResponse, BrError> {
    let gram = s.whitened_gram_given_mui(q, mui)?;
    best_response_from_gram(&gram, s.max_power(q), s.circuit_power(q), cfg)
}

/// Best response of player `q` to the other players' strategies in `profile`.
pub fn best_response(
    s: &ReducedScenario,
    q: usize,
    profile: &StrategyProfile,
    cfg: &DinkelbachConfig,
) -> Result<BestResponse, BrError> {
    best_response_given_mui(s, q, &s.mui_covariance(q, profile), cfg)
}

/// Best responses of all players against one frozen profile.
pub fn best_responses(
    s: &ReducedScenario,
    profile: &StrategyProfile,
    cfg: &DinkelbachConfig,
) -> Result<Vec<BestResponse>, BrError> {
    (0..s.players()).map(|q| best_response(s, q, profile, cfg)).collect()
}

/// The best response as a projection: `[-(Hbar^H R^-1 Hbar)^-1]` projected
/// onto `{Q >= 0, Tr Q = p_hat}`.
pub fn projection_best_response(
    s: &ReducedScenario,
    q: usize,
    profile: &StrategyProfile,
    p_hat: f64,
) -> Result<Hermitian, BrError> {
    let gram = s.whitened_gram(q, profile)?;
    projection_from_gram(&gram, p_hat)
}

pub fn projection_from_gram(gram: &Hermitian, p_hat: f64) -> Result<Hermitian, BrError> {
    let x = Cholesky::new(gram)?.inverse().scale_h(-1.0);
    Ok(psd_trace_projection(&x, p_hat)?)
}
