use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::EquilibriumError;
use crate::best_response::{best_response, DinkelbachConfig};
use crate::game::{ReducedScenario, StrategyProfile};
use crate::sampling::{random_psd_in_budget, rng_from_seed, SimRng};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SmoothnessConfig {
    pub n_pairs: usize,
    /// Every second pair is `(Q, (1 - t) Q + t Y)` with this `t`; the others
    /// are independent draws.
    pub perturbation: f64,
    pub seed: u64,
    /// Weights for the block-maximum ratio; the Perron vector of `S` if unset.
    pub weights: Option<Vec<f64>>,
    pub dinkelbach: DinkelbachConfig,
}

impl Default for SmoothnessConfig {
    fn default() -> Self {
        Self {
            n_pairs: 200,
            perturbation: 1e-3,
            seed: 0,
            weights: None,
            dinkelbach: DinkelbachConfig::default(),
        }
    }
}

/// Largest observed ratios of the power mapping `Q -> p_hat(Q)`; lower bounds
/// on its true Lipschitz moduli.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PowerSmoothness {
    /// `||p_hat - p_hat'||_2 / ||Q - Q'||_F`.
    pub max_ratio_l2: f64,
    /// Same with the `w`-weighted max norm on both sides.
    pub max_ratio_weighted_inf: f64,
    pub weights: Vec<f64>,
    pub pairs: usize,
    /// Pairs dropped because a best response failed or the pair coincided.
    pub skipped: usize,
}

fn powers(s: &ReducedScenario, p: &StrategyProfile, cfg: &DinkelbachConfig) -> Option<Vec<f64>> {
    (0..s.players())
        .map(|q| best_response(s, q, p, cfg).ok().map(|br| br.p_hat))
        .collect()
}

pub fn estimate_power_smoothness(
    s: &ReducedScenario,
    cfg: &SmoothnessConfig,
    default_weights: &[f64],
) -> Result<PowerSmoothness, EquilibriumError> {
    let n = s.players();
    let weights = cfg.weights.clone().unwrap_or_else(|| default_weights.to_vec());
    if weights.len() != n || weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(EquilibriumError::InvalidParameter("one positive weight per player required"));
    }
    if !(cfg.perturbation > 0.0 && cfg.perturbation <= 1.0) {
        return Err(EquilibriumError::InvalidParameter("perturbation must lie in (0, 1]"));
    }
    cfg.dinkelbach.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    let draw = |rng: &mut SimRng| {
        StrategyProfile::new((0..n).map(|q| random_psd_in_budget(rng, s.rank(q), s.max_power(q))).collect())
    };
    let mut out = PowerSmoothness {
        max_ratio_l2: 0.0,
        max_ratio_weighted_inf: 0.0,
        weights: weights.clone(),
        pairs: 0,
        skipped: 0,
    };
    for k in 0..cfg.n_pairs {
        let a = draw(&mut rng);
        let b = if k % 2 == 0 {
            draw(&mut rng)
        } else {
            let y = draw(&mut rng);
            let t = cfg.perturbation;
            StrategyProfile::new(
                (0..n)
                    .map(|q| a.get(q).scale_h(1.0 - t).add_h(&y.get(q).scale_h(t)))
                    .collect(),
            )
        };
        let (pa, pb) = match (powers(s, &a, &cfg.dinkelbach), powers(s, &b, &cfg.dinkelbach)) {
            (Some(pa), Some(pb)) => (pa, pb),
            _ => {
                out.skipped += 1;
                continue;
            }
        };
        let dq = a.block_distances(&b);
        let dq_l2 = dq.iter().map(|d| d * d).sum::<f64>().sqrt();
        let dq_inf = dq.iter().zip(&weights).map(|(d, w)| d / w).fold(0.0, f64::max);
        if dq_l2 == 0.0 || dq_inf == 0.0 {
            out.skipped += 1;
            continue;
        }
        let dp: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).collect();
        let dp_l2 = dp.iter().map(|d| d * d).sum::<f64>().sqrt();
        let dp_inf = dp.iter().zip(&weights).map(|(d, w)| d / w).fold(0.0, f64::max);
        out.max_ratio_l2 = out.max_ratio_l2.max(dp_l2 / dq_l2);
        out.max_ratio_weighted_inf = out.max_ratio_weighted_inf.max(dp_inf / dq_inf);
        out.pairs += 1;
    }
    Ok(out)
}
