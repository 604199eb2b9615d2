//! Numerical core for competitive energy-efficient power allocation in MIMO
//! interference networks.
//!
//! Every player (a transmitter-receiver pair) picks a transmit covariance
//! matrix that maximizes its own energy efficiency, i.e. achievable rate over
//! consumed power, treating the other players' signals as noise. This crate
//! provides:
//!
//! - [`linalg`]: dense complex matrix kernels (Hermitian EVD, compact SVD,
//!   pseudoinverse, trace-constrained PSD projection, the complex/real
//!   embedding, Perron vectors).
//! - [`game`]: network scenarios, channel generation, the rank reduction of the
//!   direct channels, MUI covariance, rate and energy efficiency.
//! - [`best_response`]: Dinkelbach power search and eigen-waterfilling, with the
//!   projection form as an independent route.
//! - [`equilibrium`]: interference matrices, uniqueness criteria and numerical
//!   verifiers for the Lipschitz, monotonicity and power-set smoothness bounds.
//! - [`iwfa`]: the totally asynchronous energy-efficient iterative waterfilling
//!   simulator.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the CLI
//! live in the companion `mimo-ee` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod best_response;
pub mod equilibrium;
pub mod game;
pub mod iwfa;
pub mod linalg;
pub mod sampling;

pub use best_response::{BestResponse, BrError, DinkelbachConfig};
pub use game::{NetworkScenario, ReducedScenario, ScenarioError, StrategyProfile};
pub use linalg::{CMatrix, Hermitian, LinalgError, RealMatrix, C64};
