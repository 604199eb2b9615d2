use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mimo_ee_core::best_response::best_responses;
use mimo_ee_core::equilibrium::{criteria, interference_matrix_sampled, interference_matrix_square};
use mimo_ee_core::game::generate_scenario;
use mimo_ee_core::sampling::derive_seed;
use mimo_ee_core::StrategyProfile;
use mimo_ee::config::ExperimentConfig;
use mimo_ee::convergence::{configured_scenario, run_convergence_experiment, run_single, write_records_csv};
use mimo_ee::lemma_suite::run_lemma_suite;
use mimo_ee::scenario_file::{read_scenario, scenario_to_json, GeneratorInfo};
use mimo_ee::sweep::{run_criteria_sweep, write_cells_csv, write_sweep_csv};
use mimo_ee::trace::write_trace_csv;
use mimo_ee::{json, output_path, HarnessError};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "mimo-ee", version, about = "Energy-efficient MIMO power allocation games")]
struct Cli {
    /// JSON experiment config; defaults apply to missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent. Relative paths go under $MIMO_EE_OUT_DIR.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// No summaries on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Scenario files.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
    /// Best responses.
    #[command(subcommand)]
    Br(BrCmd),
    /// Uniqueness criteria.
    #[command(subcommand)]
    Criteria(CriteriaCmd),
    /// Iterative waterfilling.
    #[command(subcommand)]
    Iwfa(IwfaCmd),
    /// Numerical bound checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// Draw a scenario from the config and write it as JSON.
    Gen,
    /// Summarize a scenario file.
    Show { file: PathBuf },
}

#[derive(Subcommand)]
enum BrCmd {
    /// Best responses of all players to uniform power.
    Solve,
}

#[derive(Subcommand)]
enum CriteriaCmd {
    /// Criteria of a single scenario.
    Eval,
    /// Monte-Carlo sweep over the SNR x SIR grid.
    Sweep,
}

#[derive(Subcommand)]
enum IwfaCmd {
    /// One run with the configured schedule; writes the trace.
    Run,
    /// Paired synchronous and asynchronous runs over `iwfa.runs` scenarios.
    Compare,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Lipschitz, monotonicity, power-set and sqrt(Q) checks.
    Lemmas,
}

enum Failure {
    Validation(HarnessError),
    Assertion(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Validation(e)
    }
}

struct Ctx {
    cfg: ExperimentConfig,
    out: Option<PathBuf>,
    format: Format,
    quiet: bool,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn emit(&self, write: impl FnOnce(&mut dyn Write) -> Result<(), HarnessError>) -> Result<(), HarnessError> {
        match &self.out {
            Some(path) => {
                let path = output_path(path);
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
                }
                let file = File::create(&path).map_err(|e| HarnessError::io(&path, e))?;
                let mut w = BufWriter::new(file);
                write(&mut w)?;
                w.flush().map_err(|e| HarnessError::io(&path, e))?;
                Ok(())
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                write(&mut w)?;
                w.flush()?;
                Ok(())
            }
        }
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<(), HarnessError> {
        self.emit(|w| Ok(w.write_all(json::to_string(value)?.as_bytes())?))
    }

    /// A sibling path: `sweep.csv` -> `sweep.cells.csv`.
    fn sibling(&self, tag: &str) -> Option<PathBuf> {
        self.out.as_ref().map(|p| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let ext = p.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
            p.with_file_name(format!("{stem}.{tag}{ext}"))
        })
    }
}

#[derive(Serialize)]
struct BrRow {
    player: usize,
    p_hat: f64,
    p_unconstrained: f64,
    water_level: f64,
    dinkelbach_iters: usize,
    energy_efficiency: f64,
    degenerate: bool,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let ctx = Ctx {
        out: cli.out.clone().or_else(|| cfg.out.clone()),
        cfg,
        format: cli.format,
        quiet: cli.quiet,
    };
    let cfg = &ctx.cfg;
    match cli.command {
        Command::Scenario(ScenarioCmd::Gen) => {
            let params = cfg.scenario.params(cfg.seed);
            let g = generate_scenario(&params).map_err(HarnessError::from)?;
            if g.sir_ignored {
                ctx.note("warning: finite SIR ignored for a single player");
            }
            let text = scenario_to_json(&g.scenario, Some(GeneratorInfo::from(&params)))?;
            ctx.emit(|w| Ok(w.write_all(text.as_bytes())?))?;
        }
        Command::Scenario(ScenarioCmd::Show { file }) => {
            let net = read_scenario(&file)?;
            let s = net.reduce().map_err(HarnessError::from)?;
            #[derive(Serialize)]
            struct Summary {
                players: usize,
                tx_antennas: Vec<usize>,
                rx_antennas: Vec<usize>,
                reduced_ranks: Vec<usize>,
                max_power: Vec<f64>,
                circuit_power: Vec<f64>,
                seed: u64,
            }
            let n = net.players();
            ctx.emit_json(&Summary {
                players: n,
                tx_antennas: (0..n).map(|q| net.tx_antennas(q)).collect(),
                rx_antennas: (0..n).map(|q| net.rx_antennas(q)).collect(),
                reduced_ranks: s.ranks().to_vec(),
                max_power: net.max_powers().to_vec(),
                circuit_power: net.circuit_powers().to_vec(),
                seed: net.seed(),
            })?;
        }
        Command::Br(BrCmd::Solve) => {
            let s = configured_scenario(cfg)?.reduce().map_err(HarnessError::from)?;
            let brs = best_responses(&s, &StrategyProfile::uniform(&s), &cfg.dinkelbach).map_err(HarnessError::from)?;
            match ctx.format {
                Format::Json => ctx.emit_json(&brs)?,
                Format::Csv => ctx.emit(|w| {
                    let mut csv = csv::Writer::from_writer(w);
                    for (q, b) in brs.iter().enumerate() {
                        csv.serialize(BrRow {
                            player: q,
                            p_hat: b.p_hat,
                            p_unconstrained: b.p_unconstrained,
                            water_level: b.water_level,
                            dinkelbach_iters: b.dinkelbach_iters,
                            energy_efficiency: b.energy_efficiency,
                            degenerate: b.degenerate,
                        })?;
                    }
                    csv.flush()?;
                    Ok(())
                })?,
            }
        }
        Command::Criteria(CriteriaCmd::Eval) => {
            let s = configured_scenario(cfg)?.reduce().map_err(HarnessError::from)?;
            let ifm = if s.all_direct_square() {
                interference_matrix_square(&s).map_err(HarnessError::from)?
            } else {
                let n = cfg.criteria.sampled_profiles.unwrap_or(100);
                interference_matrix_sampled(&s, n, derive_seed(cfg.seed, &[1])).map_err(HarnessError::from)?
            };
            let report = criteria(&s, &ifm, cfg.criteria.smoothness.as_ref()).map_err(HarnessError::from)?;
            ctx.note(format!(
                "sr(S) = {:.6}, sr(S^s) = {:.6}, contraction {}, qvi {}",
                report.sr_s, report.sr_ssym, report.interference_ok_contraction, report.interference_ok_qvi
            ));
            #[derive(Serialize)]
            struct Eval<'a> {
                interference_matrix: &'a mimo_ee_core::RealMatrix,
                report: &'a mimo_ee_core::equilibrium::CriteriaReport,
            }
            ctx.emit_json(&Eval {
                interference_matrix: &ifm.matrix,
                report: &report,
            })?;
        }
        Command::Criteria(CriteriaCmd::Sweep) => {
            let res = run_criteria_sweep(cfg)?;
            match ctx.format {
                Format::Json => ctx.emit_json(&res)?,
                Format::Csv => {
                    ctx.emit(|w| write_sweep_csv(w, cfg, &res.rows))?;
                    if let Some(path) = ctx.sibling("cells") {
                        let cells = Ctx {
                            out: Some(path),
                            cfg: cfg.clone(),
                            ..ctx
                        };
                        cells.emit(|w| write_cells_csv(w, cfg, &res.cells))?;
                    }
                }
            }
            for c in &res.cells {
                ctx.note(format!(
                    "snr {:>5} dB  sir {:>5} dB  sr(S)<1: {:.3} +- {:.3}  sr(S^s)<1: {:.3} +- {:.3}",
                    c.snr_db, c.sir_db, c.frac_contraction, c.stderr_contraction, c.frac_qvi, c.stderr_qvi
                ));
            }
            if !res.assertions_hold() {
                let mut msg = format!("{} rows violate sr(S^s) < 1 => sr(S) < 1", res.implication_violations);
                for v in &res.monotonicity_violations {
                    msg.push_str("\n  ");
                    msg.push_str(v);
                }
                return Err(Failure::Assertion(msg));
            }
        }
        Command::Iwfa(IwfaCmd::Run) => {
            let (_, trace) = run_single(cfg)?;
            ctx.note(format!("{:?} after {} slots", trace.termination, trace.slots()));
            match ctx.format {
                Format::Json => ctx.emit_json(&trace)?,
                Format::Csv => ctx.emit(|w| {
                    write_trace_csv(w, &format!("seed={}", cfg.seed), &trace, cfg.iwfa.trace_thinning)
                })?,
            }
        }
        Command::Iwfa(IwfaCmd::Compare) => {
            let res = run_convergence_experiment(cfg)?;
            let records = res.records(cfg.scenario.sir_db);
            for r in &records {
                ctx.note(format!("run {} {}: {} after {} slots", r.run, r.mode, r.label, r.slots));
            }
            match ctx.format {
                Format::Json => ctx.emit_json(&records)?,
                Format::Csv => ctx.emit(|w| write_records_csv(w, cfg, &records))?,
            }
        }
        Command::Verify(VerifyCmd::Lemmas) => {
            let report = run_lemma_suite(cfg)?;
            for r in &report.reports {
                ctx.note(format!(
                    "{:?} [{}]: {:?}, {} samples, {} violations",
                    r.report.lemma, r.target, r.report.status, r.report.samples, r.report.violations
                ));
            }
            ctx.emit_json(&report)?;
            if !report.passed {
                return Err(Failure::Assertion("lemma suite failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(2)
        }
    }
}
