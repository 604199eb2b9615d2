//! Sampling checks of the bounds behind the uniqueness results.
//!
//! Each verifier draws random inputs, evaluates both sides of an inequality
//! and keeps the worst case. A violation beyond [`LEMMA_SLACK`] fails the
//! report and records the offending pair as a witness.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{criteria_from_matrix, interference_matrix_square, EquilibriumError, QviOperator};
use crate::game::{NetworkScenario, ReducedScenario, StrategyProfile};
use crate::linalg::{psd_trace_projection, CMatrix, Hermitian};
use crate::sampling::{random_hermitian, random_psd_in_budget, random_psd_with_trace, rng_from_seed, SimRng};
use rand::Rng;

/// Absolute slack allowed on every sampled inequality.
pub const LEMMA_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Lemma {
    Lipschitz,
    StrongMonotonicity,
    PowerSetSmoothness,
    SqrtQLowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum LemmaStatus {
    Passed,
    Failed,
}

/// The pair (or triple) of inputs that broke a bound.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub sample: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub first: Vec<Hermitian>,
    pub second: Vec<Hermitian>,
    /// Power vectors for the power-set check.
    pub powers: Option<(Vec<f64>, Vec<f64>)>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub status: LemmaStatus,
    /// `L`, `mu`, `1` or `sqrt(Q)` depending on the lemma.
    pub constant: f64,
    pub samples: usize,
    pub violations: usize,
    /// Worst observed ratio: largest for upper bounds, smallest for the
    /// monotonicity lower bound.
    pub worst_ratio: f64,
    /// Smallest `rhs - lhs` (or `lhs - rhs`) seen; negative means violated.
    pub min_margin: f64,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl LemmaReport {
    fn new(lemma: Lemma, constant: f64, worst_ratio: f64) -> Self {
        Self {
            lemma,
            status: LemmaStatus::Passed,
            constant,
            samples: 0,
            violations: 0,
            worst_ratio,
            min_margin: f64::INFINITY,
            witness: None,
            note: None,
        }
    }

    fn record(&mut self, margin: f64, witness: impl FnOnce() -> Witness) {
        self.samples += 1;
        if margin < self.min_margin {
            self.min_margin = margin;
        }
        if margin < -LEMMA_SLACK {
            self.violations += 1;
            self.status = LemmaStatus::Failed;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status == LemmaStatus::Passed
    }
}

fn random_profile(rng: &mut SimRng, s: &ReducedScenario, boundary: bool) -> StrategyProfile {
    StrategyProfile::new(
        (0..s.players())
            .map(|q| {
                if boundary {
                    random_psd_with_trace(rng, s.rank(q), s.max_power(q))
                } else {
                    random_psd_in_budget(rng, s.rank(q), s.max_power(q))
                }
            })
            .collect(),
    )
}

fn difference(a: &StrategyProfile, b: &StrategyProfile) -> StrategyProfile {
    StrategyProfile::new(a.iter().zip(b.iter()).map(|(x, y)| x.sub_h(y)).collect())
}

fn stacked_norm(blocks: &[Hermitian]) -> f64 {
    blocks.iter().map(|b| b.frobenius_norm_sqr()).sum::<f64>().sqrt()
}

/// `||F(Q) - F(Q')||_F <= sigma_max(I + S) ||Q - Q'||_F` on pairs drawn from
/// the full strategy sets.
pub fn verify_lipschitz(s: &ReducedScenario, n_pairs: usize, seed: u64) -> Result<LemmaReport, EquilibriumError> {
    let op = QviOperator::new(s)?;
    let crit = criteria_from_matrix(&interference_matrix_square(s)?.matrix)?;
    let l = crit.sigma_max_i_plus_s;
    let mut report = LemmaReport::new(Lemma::Lipschitz, l, 0.0);
    let mut rng = rng_from_seed(seed);
    for k in 0..n_pairs {
        let a = random_profile(&mut rng, s, false);
        let b = random_profile(&mut rng, s, false);
        let d = difference(&a, &b);
        let dq = stacked_norm(d.as_slice());
        let df = stacked_norm(&op.apply_linear(&d));
        if dq > 0.0 {
            report.worst_ratio = report.worst_ratio.max(df / dq);
        }
        let (lhs, rhs) = (df, l * dq);
        report.record(rhs - lhs, || Witness {
            sample: k,
            lhs,
            rhs,
            first: a.clone().into_vec(),
            second: b.clone().into_vec(),
            powers: None,
        });
    }
    Ok(report)
}

/// `<F(Q) - F(Q'), Q - Q'> >= (1 - sr(S^s)) ||Q - Q'||_F^2` on pairs drawn
/// from the full-power boundary. When `sr(S^s) >= 1` the constant is not
/// positive and the map is not strongly monotone, but the inequality is still
/// checked; the report carries a note.
pub fn verify_monotonicity(s: &ReducedScenario, n_pairs: usize, seed: u64) -> Result<LemmaReport, EquilibriumError> {
    let op = QviOperator::new(s)?;
    let crit = criteria_from_matrix(&interference_matrix_square(s)?.matrix)?;
    let mu = 1.0 - crit.sr_ssym;
    let mut report = LemmaReport::new(Lemma::StrongMonotonicity, mu, f64::INFINITY);
    if !crit.interference_ok_qvi {
        report.note = Some(alloc::format!(
            "sr(S^s) = {} >= 1, the map is not strongly monotone on this scenario",
            crit.sr_ssym
        ));
    }
    let mut rng = rng_from_seed(seed);
    for k in 0..n_pairs {
        let a = random_profile(&mut rng, s, true);
        let b = random_profile(&mut rng, s, true);
        let d = difference(&a, &b);
        let df = op.apply_linear(&d);
        let inner: f64 = df.iter().zip(d.iter()).map(|(x, y)| x.inner_re(y)).sum();
        let dq2 = d.iter().map(|x| x.frobenius_norm_sqr()).sum::<f64>();
        if dq2 > 0.0 {
            report.worst_ratio = report.worst_ratio.min(inner / dq2);
        }
        let (lhs, rhs) = (inner, mu * dq2);
        report.record(lhs - rhs, || Witness {
            sample: k,
            lhs,
            rhs,
            first: a.clone().into_vec(),
            second: b.clone().into_vec(),
            powers: None,
        });
    }
    Ok(report)
}

/// `||[Y]_{p} - [Y]_{p'}||_F <= |p - p'|` per player, and the stacked
/// version against `||p - p'||_2`, for random Hermitian `Y` and powers in
/// `[0, P_q]`. Each sample checks every player once plus the aggregate.
pub fn verify_power_set_smoothness(
    s: &ReducedScenario,
    n_triples: usize,
    seed: u64,
) -> Result<LemmaReport, EquilibriumError> {
    let n = s.players();
    let mut report = LemmaReport::new(Lemma::PowerSetSmoothness, 1.0, 0.0);
    let mut rng = rng_from_seed(seed);
    for k in 0..n_triples {
        let ys: Vec<Hermitian> = (0..n).map(|q| random_hermitian(&mut rng, s.rank(q), 2.0)).collect();
        let p: Vec<f64> = (0..n).map(|q| rng.random::<f64>() * s.max_power(q)).collect();
        let p2: Vec<f64> = (0..n).map(|q| rng.random::<f64>() * s.max_power(q)).collect();
        let mut worst = f64::INFINITY;
        let mut dist_sq = 0.0;
        let mut first = Vec::with_capacity(n);
        let mut second = Vec::with_capacity(n);
        for q in 0..n {
            let a = psd_trace_projection(&ys[q], p[q])?;
            let b = psd_trace_projection(&ys[q], p2[q])?;
            let d = (a.as_matrix() - b.as_matrix()).frobenius_norm();
            let dp = (p[q] - p2[q]).abs();
            if dp > 0.0 {
                report.worst_ratio = report.worst_ratio.max(d / dp);
            }
            worst = worst.min(dp - d);
            dist_sq += d * d;
            first.push(a);
            second.push(b);
        }
        let dp_l2 = p.iter().zip(&p2).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        let lhs = dist_sq.sqrt();
        let margin = worst.min(dp_l2 - lhs);
        report.record(margin, || Witness {
            sample: k,
            lhs,
            rhs: dp_l2,
            first,
            second,
            powers: Some((p.clone(), p2.clone())),
        });
    }
    Ok(report)
}

/// Identity channels, unit noise and a perturbation of one player only:
/// every receiver sees the same change, so `||dF||_F / ||dQ||_F = sqrt(Q)`.
/// Passes when the observed ratio equals `sqrt(Q)` within [`LEMMA_SLACK`] and
/// stays below `sigma_max(I + S)`.
pub fn sqrt_q_construction(players: usize, antennas: usize, seed: u64) -> Result<LemmaReport, EquilibriumError> {
    if players == 0 || antennas == 0 {
        return Err(EquilibriumError::InvalidParameter("need at least one player and antenna"));
    }
    let channels = (0..players)
        .map(|_| (0..players).map(|_| CMatrix::identity(antennas)).collect())
        .collect();
    let budget = antennas as f64;
    let net = NetworkScenario::new(
        channels,
        alloc::vec![Hermitian::identity(antennas); players],
        alloc::vec![budget; players],
        alloc::vec![1.0; players],
        seed,
    )?;
    let s = net.reduce()?;
    let op = QviOperator::new(&s)?;
    let l = criteria_from_matrix(&interference_matrix_square(&s)?.matrix)?.sigma_max_i_plus_s;
    let target = (players as f64).sqrt();
    let mut report = LemmaReport::new(Lemma::SqrtQLowerBound, target, 0.0);
    let mut rng = rng_from_seed(seed);
    let a = random_profile(&mut rng, &s, false);
    let o = rng.random_range(0..players);
    let mut b = a.clone();
    b.set(o, random_psd_in_budget(&mut rng, antennas, budget));
    let fa = op.apply(&a);
    let fb = op.apply(&b);
    let df: Vec<Hermitian> = fa.iter().zip(&fb).map(|(x, y)| x.sub_h(y)).collect();
    let dq = stacked_norm(difference(&a, &b).as_slice());
    let ratio = stacked_norm(&df) / dq;
    report.worst_ratio = ratio;
    let margin = (LEMMA_SLACK - (ratio - target).abs()).min(l - ratio + LEMMA_SLACK) - LEMMA_SLACK;
    report.record(margin, || Witness {
        sample: 0,
        lhs: ratio,
        rhs: target,
        first: a.clone().into_vec(),
        second: b.clone().into_vec(),
        powers: None,
    });
    Ok(report)
}
