//! Scenario files, experiment drivers and the `mimo-ee` command line for the
//! energy-efficiency game in `mimo-ee-core`.
//!
//! Every driver is deterministic given its config: trial `k` draws its channels
//! from `derive_seed(seed, [k])`, and parallel trials are collected in trial
//! order.

pub mod config;
pub mod convergence;
pub mod json;
pub mod lemma_suite;
pub mod scenario_file;
pub mod sweep;
pub mod trace;

use std::io;
use std::path::{Path, PathBuf};

use mimo_ee_core::equilibrium::EquilibriumError;
use mimo_ee_core::iwfa::IwfaError;
use mimo_ee_core::{BrError, LinalgError, ScenarioError};
use thiserror::Error;

pub use config::ExperimentConfig;

/// Default directory for outputs written without an explicit path.
pub const OUT_DIR_ENV: &str = "MIMO_EE_OUT_DIR";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Stream(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Iwfa(#[from] IwfaError),
    #[error(transparent)]
    BestResponse(#[from] BrError),
}

impl HarnessError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Resolves an output path: absolute paths are kept, relative ones are placed
/// under `$MIMO_EE_OUT_DIR` when it is set.
pub fn output_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}
