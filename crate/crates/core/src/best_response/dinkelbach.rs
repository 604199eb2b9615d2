use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{active_modes, initial_power, BrError, DinkelbachConfig};
use crate::game::{ReducedScenario, StrategyProfile};

/// Relative slack on the monotonicity check of the Dinkelbach parameter.
const NU_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DinkelbachOutcome {
    /// Trace of the final iterate, the unconstrained EE-optimal power.
    pub power: f64,
    pub iterations: usize,
    /// Final gap `|R - nu (Tr Q + Psi)|`.
    pub delta: f64,
    /// `nu^(1), nu^(2), ...`; non-decreasing.
    pub nu: Vec<f64>,
}

/// Dinkelbach iteration on the eigen-gains `d` of `Hbar^H R^-1 Hbar`.
///
/// All iterates share the eigenvectors of the gram, so the matrix recursion
/// `Q <- U (I/nu - D^-1)^+ U^H` runs on the power vector alone and the rate
/// is `sum_k ln(1 + d_k p_k)`.
pub fn dinkelbach_gains(
    d: &[f64],
    circuit_power: f64,
    init_per_mode: f64,
    cfg: &DinkelbachConfig,
) -> Result<DinkelbachOutcome, BrError> {
    cfg.validate()?;
    if d.is_empty() || d.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(BrError::InvalidInput("gains must be positive and finite"));
    }
    if !(circuit_power > 0.0 && circuit_power.is_finite()) {
        return Err(BrError::InvalidInput("circuit power must be positive"));
    }
    if !(init_per_mode > 0.0 && init_per_mode.is_finite()) {
        return Err(BrError::InvalidInput("initial power must be positive"));
    }
    let rate = |p: &[f64]| -> f64 { d.iter().zip(p).map(|(g, x)| (g * x).ln_1p()).sum() };

    let mut p: Vec<f64> = alloc::vec![init_per_mode; d.len()];
    let mut delta = 2.0 * cfg.epsilon;
    let mut nus = Vec::new();
    let mut i = 0;
    while delta > cfg.epsilon {
        if i == cfg.max_iters {
            return Err(BrError::NotConverged {
                delta,
                iterations: i,
            });
        }
        let nu = rate(&p) / (p.iter().sum::<f64>() + circuit_power);
        if let Some(&prev) = nus.last() {
            if nu < prev - NU_SLACK * prev {
                return Err(BrError::NonMonotone {
                    iteration: i + 1,
                    previous: prev,
                    current: nu,
                });
            }
        }
        nus.push(nu);
        for (x, g) in p.iter_mut().zip(d) {
            *x = (1.0 / nu - 1.0 / g).max(0.0);
        }
        delta = (rate(&p) - nu * (p.iter().sum::<f64>() + circuit_power)).abs();
        i += 1;
    }
    Ok(DinkelbachOutcome {
        power: p.iter().sum(),
        iterations: i,
        delta,
        nu: nus,
    })
}

/// Unconstrained EE-optimal power of player `q` against `profile`.
pub fn dinkelbach_power(
    s: &ReducedScenario,
    q: usize,
    profile: &StrategyProfile,
    cfg: &DinkelbachConfig,
) -> Result<DinkelbachOutcome, BrError> {
    cfg.validate()?;
    let gram = s.whitened_gram(q, profile)?;
    let (eig, active) = active_modes(&gram);
    if active == 0 {
        return Ok(DinkelbachOutcome {
            power: 0.0,
            iterations: 0,
            delta: 0.0,
            nu: Vec::new(),
        });
    }
    let init = initial_power(cfg, s.max_power(q)) / s.rank(q) as f64;
    dinkelbach_gains(&eig.values[..active], s.circuit_power(q), init, cfg)
}
