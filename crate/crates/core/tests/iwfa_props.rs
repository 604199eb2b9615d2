use mimo_ee_core::game::{generate_scenario, ScenarioParams};
use mimo_ee_core::iwfa::{make_schedule, run_iwfa, IwfaConfig, ScheduleMode, StopRule};
use mimo_ee_core::StrategyProfile;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn traces_are_well_formed(
        seed in any::<u64>(),
        players in 1usize..=4,
        antennas in 1usize..=3,
        sir_db in -10.0f64..20.0,
        mode in 0usize..3,
        rho in 0.1f64..1.0,
        max_delay in 0usize..4,
    ) {
        let s = generate_scenario(&ScenarioParams { players, antennas, sir_db, seed, ..ScenarioParams::default() })
            .unwrap()
            .scenario
            .reduce()
            .unwrap();
        let mode = match mode {
            0 => ScheduleMode::Sequential,
            1 => ScheduleMode::Synchronous,
            _ => ScheduleMode::Asynchronous { rho: vec![rho; players], max_delay },
        };
        let sched = make_schedule(mode, players, seed).unwrap();
        let stop = StopRule { max_slots: 150, ..StopRule::default() };
        let cfg = IwfaConfig { snapshot_stride: 7, ..IwfaConfig::default() };
        let trace = run_iwfa(&s, &sched, &StrategyProfile::uniform(&s), &stop, &cfg).unwrap();
        for (i, rec) in trace.records.iter().enumerate() {
            prop_assert_eq!(rec.slot, i + 1);
            prop_assert!(rec.block_residual >= 0.0);
            prop_assert!(rec.ee.iter().all(|&e| e >= 0.0 && e.is_finite()));
            if let Some(snap) = &rec.snapshot {
                prop_assert_eq!(rec.slot % 7, 0);
                prop_assert!(snap.validate(&s).is_ok());
            }
        }
        prop_assert!(trace.final_profile.validate(&s).is_ok());
        let again = run_iwfa(&s, &sched, &StrategyProfile::uniform(&s), &stop, &cfg).unwrap();
        prop_assert_eq!(trace, again);
    }
}
