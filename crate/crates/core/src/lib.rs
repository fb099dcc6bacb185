//! Quantum annealing with variational counter-diabatic driving for the
//! p = 3 p-spin model and the Landau–Zener two-level system.
//!
//! The pieces compose as schedule → gauge coefficients → Hamiltonian builder
//! → integrator → metrics. [`oracle`] holds a brute-force full-space backend
//! for cross-checks, and [`cli`] the sweep/report front end.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gauge;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod schedules;

pub use dynamics::{
    evolve, ground_state, run_protocol, Basis, Evolution, IntegratorConfig, Method, StateVector, StepCount,
};
pub use error::{Error, Result};
pub use gauge::{coefficients, GaugeCoefficients};
pub use metrics::{fidelity, residual_energy, tts, RunResult};
pub use model::{Frame, Hamiltonian, Model, Protocol, ProtocolSpec, TimeDependentHamiltonian};
pub use schedules::{GammaMode, ScheduleSpec, ScheduleValues};
