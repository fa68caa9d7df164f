//! Numerical laboratory for a discrete-time multi-strategy competition map.
//!
//! A population consists of `k` competing strategies. Strategy `i` has a
//! per-capita birth rate `b_i` and death rate `d_i`; all strategies share a
//! suppression factor `f(x) ∈ [0, 1]` describing juvenile survival under
//! total population pressure. One step of the map is
//!
//! ```text
//! x_i(t+1) = (1 - d_i) x_i(t) + b_i f(x(t)) x_i(t)
//! ```
//!
//! The crate provides:
//!
//! * [`model`] — model types, the four built-in suppression kernels, the map
//!   `T` and its one-dimensional reduction `S`;
//! * [`simulate`] — trajectories, invariant region bounds, persistence probes
//!   and pseudo-orbit residuals;
//! * [`exclusion`] — turnover coefficients `L_i = b_i / d_i`, the pairwise
//!   exclusion criterion `α ≤ 1 + β`, period-two counterexample sequences,
//!   and Euler dynamical-consistency checks;
//! * [`periodic`] — closed-form construction of period-2 coexistence orbits
//!   for two-strategy models, plus an independent Newton search oracle;
//! * [`equilibria`] — the `k + 1` axis fixed points, analytic eigenvalues,
//!   finite-difference cross-checks and stability classification;
//! * [`continuous`] — a fixed-step RK4 integrator for the continuous-time
//!   counterpart and the exact log-ratio exclusion law;
//! * [`output`] — CSV/JSON rendering with full-precision floats.

pub mod continuous;
pub mod equilibria;
mod error;
pub mod exclusion;
pub mod model;
pub mod output;
pub mod periodic;
pub mod rng;
pub mod simulate;

pub use error::Error;
pub use model::{CompetitionModel, KernelFamily, StateVector, StrategyParams, SuppressionKernel};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
