//! Monte-Carlo evaluation of the uniqueness criteria over an SNR x SIR grid.

use std::io;

use mimo_ee_core::equilibrium::{criteria, interference_matrix_sampled, interference_matrix_square, CriteriaReport};
use mimo_ee_core::game::generate_scenario;
use mimo_ee_core::sampling::derive_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::HarnessError;

pub const SWEEP_SCHEMA: &str = "mimo-ee criteria-sweep v1";
pub const CELLS_SCHEMA: &str = "mimo-ee criteria-cells v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub sir_db: f64,
    pub trial: usize,
    pub seed: u64,
    pub variant: String,
    pub sr_s: f64,
    pub sr_ssym: f64,
    pub sigma_max_i_plus_s: f64,
    pub qvi_rhs: f64,
    pub contraction_rhs: f64,
    pub ok_contraction: bool,
    pub ok_qvi: bool,
    pub power_modulus_l2: Option<f64>,
    pub power_modulus_weighted: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub snr_db: f64,
    pub sir_db: f64,
    pub trials: usize,
    pub frac_contraction: f64,
    pub stderr_contraction: f64,
    pub frac_qvi: f64,
    pub stderr_qvi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub cells: Vec<CellSummary>,
    /// Rows where `sr(S^s) < 1` but not `sr(S) < 1`.
    pub implication_violations: usize,
    /// Adjacent SIR cells whose success fraction drops by more than three
    /// binomial standard errors.
    pub monotonicity_violations: Vec<String>,
}

impl SweepResult {
    pub fn assertions_hold(&self) -> bool {
        self.implication_violations == 0 && self.monotonicity_violations.is_empty()
    }
}

fn variant_name(r: &CriteriaReport) -> String {
    serde_json::to_value(r.variant)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned).or_else(|| v.as_object().and_then(|o| o.keys().next().cloned())))
        .unwrap_or_default()
}

fn evaluate(cfg: &ExperimentConfig, snr_db: f64, sir_db: f64, trial: usize) -> Result<SweepRow, HarnessError> {
    // The same channel draw is reused across the grid; SNR and SIR only rescale it.
    let seed = derive_seed(cfg.seed, &[trial as u64]);
    let mut params = cfg.scenario.params(seed);
    params.snr_db = snr_db;
    params.sir_db = sir_db;
    let s = generate_scenario(&params)?.scenario.reduce()?;
    let ifm = if s.all_direct_square() {
        interference_matrix_square(&s)?
    } else {
        let n = cfg.criteria.sampled_profiles.unwrap_or(100);
        interference_matrix_sampled(&s, n, derive_seed(seed, &[1]))?
    };
    let smooth = cfg.criteria.smoothness.as_ref().map(|c| mimo_ee_core::equilibrium::SmoothnessConfig {
        seed: derive_seed(seed, &[2]),
        dinkelbach: cfg.dinkelbach,
        ..c.clone()
    });
    let r = criteria(&s, &ifm, smooth.as_ref())?;
    Ok(SweepRow {
        snr_db,
        sir_db,
        trial,
        seed,
        variant: variant_name(&r),
        sr_s: r.sr_s,
        sr_ssym: r.sr_ssym,
        sigma_max_i_plus_s: r.sigma_max_i_plus_s,
        qvi_rhs: r.qvi_rhs_constant,
        contraction_rhs: r.contraction_rhs_constant,
        ok_contraction: r.interference_ok_contraction,
        ok_qvi: r.interference_ok_qvi,
        power_modulus_l2: r.power_smoothness.as_ref().map(|p| p.max_ratio_l2),
        power_modulus_weighted: r.power_smoothness.as_ref().map(|p| p.max_ratio_weighted_inf),
    })
}

fn fraction(hits: usize, n: usize) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

pub fn run_criteria_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let jobs: Vec<(f64, f64, usize)> = cfg
        .grid
        .snr_db
        .iter()
        .flat_map(|&snr| {
            cfg.grid
                .sir_db
                .iter()
                .flat_map(move |&sir| (0..cfg.trials).map(move |t| (snr, sir, t)))
        })
        .collect();
    // Indexed parallel collect keeps job order.
    let rows = jobs
        .par_iter()
        .map(|&(snr, sir, t)| evaluate(cfg, snr, sir, t))
        .collect::<Result<Vec<_>, _>>()?;

    let cells: Vec<CellSummary> = rows
        .chunks(cfg.trials)
        .map(|chunk| {
            let (frac_contraction, stderr_contraction) =
                fraction(chunk.iter().filter(|r| r.ok_contraction).count(), chunk.len());
            let (frac_qvi, stderr_qvi) = fraction(chunk.iter().filter(|r| r.ok_qvi).count(), chunk.len());
            CellSummary {
                snr_db: chunk[0].snr_db,
                sir_db: chunk[0].sir_db,
                trials: chunk.len(),
                frac_contraction,
                stderr_contraction,
                frac_qvi,
                stderr_qvi,
            }
        })
        .collect();

    let implication_violations = rows.iter().filter(|r| r.ok_qvi && !r.ok_contraction).count();
    let mut monotonicity_violations = Vec::new();
    let mut order: Vec<usize> = (0..cfg.grid.sir_db.len()).collect();
    order.sort_by(|&a, &b| cfg.grid.sir_db[a].total_cmp(&cfg.grid.sir_db[b]));
    for row in cells.chunks(cfg.grid.sir_db.len()) {
        for w in order.windows(2) {
            let (lo, hi) = (&row[w[0]], &row[w[1]]);
            for (name, a, sa, b, sb) in [
                ("contraction", lo.frac_contraction, lo.stderr_contraction, hi.frac_contraction, hi.stderr_contraction),
                ("qvi", lo.frac_qvi, lo.stderr_qvi, hi.frac_qvi, hi.stderr_qvi),
            ] {
                if b < a - 3.0 * (sa * sa + sb * sb).sqrt() {
                    monotonicity_violations.push(format!(
                        "{name} fraction drops from {a} at SIR {} dB to {b} at SIR {} dB (SNR {} dB)",
                        lo.sir_db, hi.sir_db, lo.snr_db
                    ));
                }
            }
        }
    }
    Ok(SweepResult {
        rows,
        cells,
        implication_violations,
        monotonicity_violations,
    })
}

fn header(schema: &str, cfg: &ExperimentConfig) -> String {
    let s = &cfg.scenario;
    let conv = serde_json::to_value(s.snr_convention).expect("unit enum");
    let kind = serde_json::to_value(s.channel_kind).expect("unit enum");
    format!(
        "# {schema}; players={}; antennas={}; max_power={}; circuit_power={}; snr_convention={}; channel_kind={}; trials={}; seed={}\n",
        s.players,
        s.antennas,
        s.max_power,
        s.circuit_power,
        conv.as_str().unwrap_or_default(),
        kind.as_str().unwrap_or_default(),
        cfg.trials,
        cfg.seed
    )
}

fn write_rows<W: io::Write, T: Serialize>(mut w: W, head: &str, rows: &[T]) -> Result<(), HarnessError> {
    w.write_all(head.as_bytes())?;
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: io::Write>(w: W, cfg: &ExperimentConfig, rows: &[SweepRow]) -> Result<(), HarnessError> {
    write_rows(w, &header(SWEEP_SCHEMA, cfg), rows)
}

pub fn write_cells_csv<W: io::Write>(w: W, cfg: &ExperimentConfig, cells: &[CellSummary]) -> Result<(), HarnessError> {
    write_rows(w, &header(CELLS_SCHEMA, cfg), cells)
}

/// Reads a file written by [`write_sweep_csv`], checking the schema line.
pub fn read_sweep_csv<R: io::Read>(mut r: R) -> Result<Vec<SweepRow>, HarnessError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let first = text.lines().next().unwrap_or_default();
    if !first.starts_with(&format!("# {SWEEP_SCHEMA};")) {
        return Err(HarnessError::Invalid(format!("unexpected sweep header {first:?}")));
    }
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    Ok(rd.deserialize().collect::<Result<Vec<SweepRow>, _>>()?)
}
