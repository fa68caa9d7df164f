//! Trajectory iteration, the invariant region, persistence probes, and
//! pseudo-orbit residuals against the reduced map.

use crate::model::{CompetitionModel, StateVector};
use crate::{Error, Result};

/// A simulated orbit: `states[t + 1] = step(model, states[t])` exactly, so
/// two runs with identical inputs are bit-identical.
#[derive(Debug, Clone)]
pub struct Trajectory {
    model: CompetitionModel,
    states: Vec<StateVector>,
}

impl Trajectory {
    pub fn model(&self) -> &CompetitionModel {
        &self.model
    }

    /// All states, index `t = 0..=n`.
    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// Number of steps taken (`states` holds one more entry).
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory holds x0")
    }
}

/// Threshold `M` past which the kernel drops below `min_i d_i / b_i`, and the
/// radius `M̄` of the simplex that the map sends into itself.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct InvariantRegion {
    pub m: f64,
    pub m_bar: f64,
}

/// Iterates the map `n` steps from `x0`.
pub fn trajectory(model: &CompetitionModel, x0: &StateVector, n: usize) -> Result<Trajectory> {
    if x0.len() != model.k() {
        return Err(Error::DimensionMismatch {
            what: "x0",
            expected: model.k(),
            got: x0.len(),
        });
    }
    let mut states = Vec::with_capacity(n + 1);
    states.push(x0.clone());
    for step in 1..=n {
        let next = model.step(states.last().unwrap())?;
        if next.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::NonFiniteState { step });
        }
        states.push(next);
    }
    Ok(Trajectory {
        model: model.clone(),
        states,
    })
}

/// Solves `φ(M) = min_i d_i / b_i` per family and multiplies by the crude
/// one-step amplification bound to get the invariance radius.
///
/// `M` lives on the weighted-total scale; translating to the plain simplex
/// radius divides by the smallest weight, which is 1 for unweighted kernels.
/// The NestSite family uses `M = K` (its value vanishes past the carrying
/// scale).
pub fn invariant_bound(model: &CompetitionModel) -> InvariantRegion {
    let mu = model
        .b()
        .iter()
        .zip(model.d())
        .map(|(b, d)| d / b)
        .fold(f64::INFINITY, f64::min);
    let kernel = model.kernel();
    let m = match kernel.family() {
        crate::model::KernelFamily::NestSite { k_cap } => *k_cap,
        _ => kernel
            .profile_inverse(mu)
            .expect("profile families have closed-form inverses"),
    };
    let amp = model
        .b()
        .iter()
        .zip(model.d())
        .map(|(b, d)| 1.0 - d + b)
        .fold(f64::NEG_INFINITY, f64::max);
    InvariantRegion {
        m,
        m_bar: m * amp / kernel.min_weight(),
    }
}

/// Minimum total size over the final `window` steps of a `horizon`-step run.
/// A strictly positive return is empirical evidence of persistence.
pub fn persistence_probe(
    model: &CompetitionModel,
    x0: &StateVector,
    horizon: usize,
    window: usize,
) -> Result<f64> {
    if window == 0 || window > horizon {
        return Err(Error::InvalidArgument(format!(
            "window must satisfy 1 <= window <= horizon, got window={window}, horizon={horizon}"
        )));
    }
    let traj = trajectory(model, x0, horizon)?;
    let states = traj.states();
    Ok(states[states.len() - window..]
        .iter()
        .map(StateVector::total)
        .fold(f64::INFINITY, f64::min))
}

/// Sup over `t ≥ transient` of `|S_r(x_r(t)) - x_r(t+1)|`: how far the `r`-th
/// coordinate of the full trajectory is from being an exact orbit of the
/// reduced map. Small values mean the coordinate is an η-pseudo-orbit of `S`.
pub fn pseudo_orbit_residual(traj: &Trajectory, r: usize, transient: usize) -> Result<f64> {
    let model = traj.model();
    if r >= model.k() {
        return Err(Error::IndexOutOfRange {
            index: r,
            len: model.k(),
        });
    }
    if transient > traj.steps() {
        return Err(Error::InvalidArgument(format!(
            "transient {transient} is not shorter than the trajectory ({} states)",
            traj.states().len()
        )));
    }
    let states = traj.states();
    let mut sup = 0.0f64;
    for t in transient..states.len() - 1 {
        let predicted = model.reduced_map(r, states[t][r])?;
        sup = sup.max((predicted - states[t + 1][r]).abs());
    }
    Ok(sup)
}

pub(crate) fn extinct_flags<'a, I>(states: I, len: usize, k: usize, tol: f64) -> Vec<bool>
where
    I: Fn(usize) -> &'a StateVector,
{
    // Strategy i is flagged extinct when its final value sits below tol and
    // it has not grown over the last half of the run (guards against calling
    // a transient dip extinction).
    let last = states(len - 1);
    let mid = states(len / 2);
    (0..k).map(|i| last[i] < tol && last[i] <= mid[i]).collect()
}

/// Per-strategy extinction verdicts: below `tol` at the end of the run and
/// non-increasing over its last half.
pub fn extinction_diagnostics(traj: &Trajectory, tol: f64) -> Vec<bool> {
    let states = traj.states();
    extinct_flags(|t| &states[t], states.len(), traj.model().k(), tol)
}
