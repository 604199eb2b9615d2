//! Long-format CSV of an IWFA trace: one row per slot and player.

use std::io;

use mimo_ee_core::iwfa::IwfaTrace;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

pub const TRACE_SCHEMA: &str = "mimo-ee iwfa-trace v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub slot: usize,
    pub player: usize,
    pub ee: f64,
    /// Empty at slot 0, which holds the initial profile.
    pub block_residual: Option<f64>,
    pub ne_residual: Option<f64>,
    pub updated_flag: u8,
}

/// Slot 0 (the initial profile), every `thinning`-th slot and the last slot.
pub fn trace_rows(trace: &IwfaTrace, thinning: usize) -> Vec<TraceRow> {
    let thinning = thinning.max(1);
    let mut rows: Vec<TraceRow> = trace
        .initial_ee
        .iter()
        .enumerate()
        .map(|(q, &ee)| TraceRow {
            slot: 0,
            player: q,
            ee,
            block_residual: None,
            ne_residual: None,
            updated_flag: 0,
        })
        .collect();
    let last = trace.records.len();
    for rec in trace.records.iter().filter(|r| r.slot % thinning == 0 || r.slot == last) {
        rows.extend(rec.ee.iter().zip(&rec.updated).enumerate().map(|(q, (&ee, &u))| TraceRow {
            slot: rec.slot,
            player: q,
            ee,
            block_residual: Some(rec.block_residual),
            ne_residual: rec.ne_residual,
            updated_flag: u as u8,
        }));
    }
    rows
}

pub fn write_trace_csv<W: io::Write>(mut w: W, label: &str, trace: &IwfaTrace, thinning: usize) -> Result<(), HarnessError> {
    let reason = serde_json::to_value(&trace.termination)?;
    writeln!(
        w,
        "# {TRACE_SCHEMA}; {label}; termination={}; thinning={}",
        reason["reason"].as_str().unwrap_or_default(),
        thinning.max(1)
    )?;
    let mut csv = csv::Writer::from_writer(w);
    for row in trace_rows(trace, thinning) {
        csv.serialize(row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_trace_csv<R: io::Read>(r: R) -> Result<Vec<TraceRow>, HarnessError> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    Ok(rd.deserialize().collect::<Result<Vec<TraceRow>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mimo_ee_core::game::{generate_scenario, ScenarioParams};
    use mimo_ee_core::iwfa::{make_schedule, run_iwfa, IwfaConfig, ScheduleMode, StopRule};
    use mimo_ee_core::StrategyProfile;

    fn trace() -> IwfaTrace {
        let s = generate_scenario(&ScenarioParams {
            players: 3,
            antennas: 2,
            sir_db: 10.0,
            seed: 4,
            ..ScenarioParams::default()
        })
        .unwrap()
        .scenario
        .reduce()
        .unwrap();
        let sched = make_schedule(ScheduleMode::Sequential, 3, 0).unwrap();
        run_iwfa(&s, &sched, &StrategyProfile::uniform(&s), &StopRule::default(), &IwfaConfig::default()).unwrap()
    }

    #[test]
    fn thinning_keeps_first_and_last_slots() {
        let t = trace();
        let last = t.slots();
        assert!(last > 7, "{last}");
        let rows = trace_rows(&t, 7);
        let slots: Vec<usize> = rows.iter().map(|r| r.slot).step_by(3).collect();
        assert_eq!(slots[0], 0);
        assert_eq!(*slots.last().unwrap(), last);
        assert!(slots[1..slots.len() - 1].iter().all(|s| s % 7 == 0));
        assert_eq!(trace_rows(&t, 1).len(), 3 * (last + 1));
    }

    #[test]
    fn csv_round_trips() {
        let t = trace();
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, "run=0", &t, 1).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# mimo-ee iwfa-trace v1; run=0; termination=converged"));
        assert!(text.lines().nth(1).unwrap().starts_with("slot,player,ee,block_residual,ne_residual,updated_flag"));
        assert_eq!(read_trace_csv(&buf[..]).unwrap(), trace_rows(&t, 1));
    }
}
