//! Fixed-step RK4 integration of the continuous-time counterpart
//! `x_i' = -d_i x_i + b_i x_i f(x)` and the exact exclusion mechanism: along
//! any positive solution the log-ratio `b_i ln x_1 - b_1 ln x_i` is affine in
//! time with slope `b_1 d_i - b_i d_1`, so its measured slope deviation is a
//! direct meter of integrator error.
//!
//! A fixed step (no adaptive control) keeps runs deterministic, and the
//! exact-slope law gives a sharper per-run error measure than generic step
//! control would.

use serde::Serialize;

use crate::exclusion::{consistency_condition, euler_discretize};
use crate::model::{CompetitionModel, StateVector, SuppressionKernel};
use crate::simulate::{self, extinct_flags};
use crate::{Error, Result};

/// A uniformly sampled continuous-time trajectory.
#[derive(Debug, Clone)]
pub struct ContinuousTrajectory {
    model: CompetitionModel,
    times: Vec<f64>,
    states: Vec<StateVector>,
    dt: f64,
}

impl ContinuousTrajectory {
    pub fn model(&self) -> &CompetitionModel {
        &self.model
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory holds x0")
    }
}

fn rhs(model: &CompetitionModel, x: &[f64], out: &mut [f64]) {
    let f = model.suppression_slice(x);
    for (i, ((&xi, &bi), &di)) in x.iter().zip(model.b()).zip(model.d()).enumerate() {
        out[i] = -di * xi + bi * xi * f;
    }
}

/// Classical fixed-step RK4 from `x0` to `t ≈ t_max` (steps of size `dt`,
/// count rounded). Local error `O(dt⁵)`.
pub fn integrate(
    model: &CompetitionModel,
    x0: &StateVector,
    t_max: f64,
    dt: f64,
) -> Result<ContinuousTrajectory> {
    if x0.len() != model.k() {
        return Err(Error::DimensionMismatch {
            what: "x0",
            expected: model.k(),
            got: x0.len(),
        });
    }
    if !(dt > 0.0 && dt.is_finite()) || !t_max.is_finite() || t_max < dt {
        return Err(Error::InvalidArgument(format!(
            "need 0 < dt <= t_max, got dt = {dt}, t_max = {t_max}"
        )));
    }
    let steps = (t_max / dt).round().max(1.0) as usize;
    let k = model.k();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.clone());

    let mut k1 = vec![0.0; k];
    let mut k2 = vec![0.0; k];
    let mut k3 = vec![0.0; k];
    let mut k4 = vec![0.0; k];
    let mut stage = vec![0.0; k];

    for step in 1..=steps {
        let x = states.last().unwrap().as_slice();
        rhs(model, x, &mut k1);
        for i in 0..k {
            stage[i] = x[i] + 0.5 * dt * k1[i];
        }
        rhs(model, &stage, &mut k2);
        for i in 0..k {
            stage[i] = x[i] + 0.5 * dt * k2[i];
        }
        rhs(model, &stage, &mut k3);
        for i in 0..k {
            stage[i] = x[i] + dt * k3[i];
        }
        rhs(model, &stage, &mut k4);
        let next: Vec<f64> = (0..k)
            .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { step });
        }
        times.push(step as f64 * dt);
        states.push(StateVector::from_raw(next));
    }
    Ok(ContinuousTrajectory {
        model: model.clone(),
        times,
        states,
        dt,
    })
}

/// Max deviation of the per-step slope of `R(t) = b_i ln x_1 - b_1 ln x_i`
/// from its exact value `b_1 d_i - b_i d_1` (`i` 0-based, ≥ 1). The law holds
/// exactly for the flow, so the deviation measures only integrator error.
pub fn monotone_ratio_check(traj: &ContinuousTrajectory, i: usize) -> Result<f64> {
    let model = traj.model();
    if i == 0 || i >= model.k() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: model.k(),
        });
    }
    let (b, d) = (model.b(), model.d());
    let slope = b[0] * d[i] - b[i] * d[0];
    let states = traj.states();
    for (step, s) in states.iter().enumerate() {
        for idx in [0, i] {
            if s[idx] <= 0.0 {
                return Err(Error::NonpositiveComponent { index: idx, step });
            }
        }
    }
    let ratio = |s: &StateVector| b[i] * s[0].ln() - b[0] * s[i].ln();
    let mut worst = 0.0f64;
    for t in 0..states.len() - 1 {
        let measured = (ratio(&states[t + 1]) - ratio(&states[t])) / traj.dt();
        worst = worst.max((measured - slope).abs());
    }
    Ok(worst)
}

/// Side-by-side extinction verdicts for the continuous flow and its Euler
/// discretization with step `h`, started from the same state.
#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub h: f64,
    pub h_max: f64,
    pub h_valid: bool,
    /// Per-pair dynamical-consistency condition `b_1 - b_i ≤ (b_1 d_i - b_i d_1) h`.
    pub condition: Vec<bool>,
    pub continuous_extinct: Vec<bool>,
    pub discrete_extinct: Vec<bool>,
    /// True when both sides agree strategy by strategy.
    pub agree: bool,
}

/// Integrates the continuous rates and iterates the Euler-discretized map
/// from the same initial state, then compares extinction verdicts.
#[allow(clippy::too_many_arguments)]
pub fn compare_discrete_continuous(
    b: &[f64],
    d: &[f64],
    kernel: &SuppressionKernel,
    x0: &StateVector,
    h: f64,
    t_max: f64,
    dt: f64,
    tol: f64,
) -> Result<ConsistencyReport> {
    let euler = euler_discretize(b, d, h)?;
    if !euler.valid {
        return Err(Error::InvalidArgument(format!(
            "step h = {h} exceeds h_max = {}",
            euler.h_max
        )));
    }
    let condition = consistency_condition(b, d, h)?;

    let continuous_model =
        CompetitionModel::new_continuous(b.to_vec(), d.to_vec(), kernel.clone())?;
    let flow = integrate(&continuous_model, x0, t_max, dt)?;
    let continuous_extinct = extinct_flags(
        |t| &flow.states()[t],
        flow.states().len(),
        continuous_model.k(),
        tol,
    );

    let discrete_model =
        CompetitionModel::new(euler.b_h.clone(), euler.d_h.clone(), kernel.clone())?;
    let steps = (t_max / h).round().max(1.0) as usize;
    let traj = simulate::trajectory(&discrete_model, x0, steps)?;
    let discrete_extinct = simulate::extinction_diagnostics(&traj, tol);

    let agree = continuous_extinct == discrete_extinct;
    Ok(ConsistencyReport {
        h,
        h_max: euler.h_max,
        h_valid: euler.valid,
        condition,
        continuous_extinct,
        discrete_extinct,
        agree,
    })
}
