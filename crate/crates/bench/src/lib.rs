//! Shared model fixtures for the benchmarks.

use turnover::{CompetitionModel, StateVector, SuppressionKernel};

/// Two-strategy logistic model carrying an interior period-2 orbit.
pub fn oscillating_model() -> CompetitionModel {
    CompetitionModel::new(
        vec![4.0, 1.0],
        vec![1.0, 0.3],
        SuppressionKernel::logistic(1.0),
    )
    .expect("valid model")
}

/// Two-strategy logistic model with an excluded second strategy.
pub fn excluding_model() -> CompetitionModel {
    CompetitionModel::new(
        vec![2.0, 3.0],
        vec![0.5, 0.9],
        SuppressionKernel::logistic(1.0),
    )
    .expect("valid model")
}

/// Ten-strategy Ricker model for map-evaluation throughput.
pub fn wide_model() -> CompetitionModel {
    let d: Vec<f64> = (0..10).map(|i| 0.3 + 0.05 * i as f64).collect();
    let b: Vec<f64> = d
        .iter()
        .enumerate()
        .map(|(i, di)| di * (3.0 - 0.1 * i as f64))
        .collect();
    CompetitionModel::new(b, d, SuppressionKernel::ricker(0.8)).expect("valid model")
}

pub fn interior_state(k: usize) -> StateVector {
    StateVector::new((0..k).map(|i| 0.05 + 0.01 * i as f64).collect()).expect("valid state")
}
