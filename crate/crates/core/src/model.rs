//! Model data types, the suppression kernels, the discrete map `T`, and its
//! one-dimensional reduction `S`.
//!
//! All operations here are pure functions of their arguments; every value is
//! immutable after construction, so models and states can be shared freely
//! between threads.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Per-strategy vital rates. Invariants: `0 < d_i ≤ 1` and `d_i < b_i`
/// (the death-rate cap is waived for continuous-time rate vectors).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyParams {
    b: Vec<f64>,
    d: Vec<f64>,
}

impl StrategyParams {
    /// Birth rates, one per strategy.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Death rates, one per strategy.
    pub fn d(&self) -> &[f64] {
        &self.d
    }
}

/// The four built-in suppression families.
///
/// `Logistic`, `BevertonHolt` and `Ricker` are profiles `φ` applied to the
/// weighted total `⟨w, x⟩`; `NestSite` is the piecewise nest-site form and
/// takes no weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KernelFamily {
    Logistic {
        #[serde(rename = "K")]
        k_cap: f64,
    },
    BevertonHolt {
        c: f64,
    },
    Ricker {
        c: f64,
    },
    NestSite {
        #[serde(rename = "K")]
        k_cap: f64,
    },
}

impl KernelFamily {
    fn param(&self) -> (&'static str, f64) {
        match *self {
            KernelFamily::Logistic { k_cap } | KernelFamily::NestSite { k_cap } => ("K", k_cap),
            KernelFamily::BevertonHolt { c } | KernelFamily::Ricker { c } => ("c", c),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Logistic { .. } => "logistic",
            KernelFamily::BevertonHolt { .. } => "beverton_holt",
            KernelFamily::Ricker { .. } => "ricker",
            KernelFamily::NestSite { .. } => "nest_site",
        }
    }
}

/// Suppression kernel: a family plus optional positive weights (default all
/// ones). The evaluated value always lies in `[0, 1]`, `f(0) = 1`, and the
/// value is non-increasing in each coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuppressionKernel {
    #[serde(flatten)]
    family: KernelFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl SuppressionKernel {
    pub fn new(family: KernelFamily) -> Self {
        Self {
            family,
            weights: None,
        }
    }

    pub fn with_weights(family: KernelFamily, weights: Vec<f64>) -> Self {
        Self {
            family,
            weights: Some(weights),
        }
    }

    pub fn logistic(k_cap: f64) -> Self {
        Self::new(KernelFamily::Logistic { k_cap })
    }

    pub fn beverton_holt(c: f64) -> Self {
        Self::new(KernelFamily::BevertonHolt { c })
    }

    pub fn ricker(c: f64) -> Self {
        Self::new(KernelFamily::Ricker { c })
    }

    pub fn nest_site(k_cap: f64) -> Self {
        Self::new(KernelFamily::NestSite { k_cap })
    }

    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    /// Weight of coordinate `i` (1 when no weight vector is set).
    pub fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Smallest weight (1 when no weight vector is set).
    pub(crate) fn min_weight(&self) -> f64 {
        self.weights
            .as_ref()
            .map_or(1.0, |w| w.iter().cloned().fold(f64::INFINITY, f64::min))
    }

    /// The weighted total `⟨w, x⟩` the profile families respond to (plain
    /// total when no weights are set).
    pub fn weighted_total(&self, x: &[f64]) -> f64 {
        match &self.weights {
            Some(w) => x.iter().zip(w).map(|(xi, wi)| wi * xi).sum(),
            None => x.iter().sum(),
        }
    }

    /// Raw kernel value before the lower clamp. For states in the domain the
    /// raw value never exceeds 1; probes with negative coordinates (finite
    /// difference stencils, integrator stages) see the smooth extension.
    pub(crate) fn raw_value(&self, b: &[f64], x: &[f64]) -> f64 {
        match self.family {
            KernelFamily::Logistic { k_cap } => 1.0 - self.weighted_total(x) / k_cap,
            KernelFamily::BevertonHolt { c } => c / (c + self.weighted_total(x)),
            KernelFamily::Ricker { c } => (-c * self.weighted_total(x)).exp(),
            KernelFamily::NestSite { k_cap } => {
                let demand: f64 = x.iter().zip(b).map(|(xi, bi)| (1.0 + bi) * xi).sum();
                if demand <= k_cap {
                    1.0
                } else {
                    // Off the first branch x ≠ 0, so Σ b_i x_i > 0 for b_i > 0
                    // and the denominator cannot vanish.
                    let total: f64 = x.iter().sum();
                    let offspring: f64 = x.iter().zip(b).map(|(xi, bi)| bi * xi).sum();
                    (k_cap - total) / offspring
                }
            }
        }
    }

    /// Kernel value clamped below at 0. Raw values go negative past the
    /// carrying scale for the Logistic and NestSite families, while the model
    /// requires `f: ℝ₊^k → [0, 1]`.
    pub(crate) fn value(&self, b: &[f64], x: &[f64]) -> f64 {
        self.raw_value(b, x).max(0.0)
    }

    /// Identifier of the piecewise branch at `x`; used to detect when a
    /// finite-difference stencil straddles a kink.
    pub(crate) fn branch(&self, b: &[f64], x: &[f64]) -> u8 {
        match self.family {
            KernelFamily::Logistic { .. } => u8::from(self.raw_value(b, x) < 0.0),
            KernelFamily::NestSite { k_cap } => {
                let demand: f64 = x.iter().zip(b).map(|(xi, bi)| (1.0 + bi) * xi).sum();
                if demand <= k_cap {
                    0
                } else if self.raw_value(b, x) < 0.0 {
                    2
                } else {
                    1
                }
            }
            _ => 0,
        }
    }

    /// Inverse of the decreasing profile `φ` at level `m ∈ (0, 1)`, i.e. the
    /// weighted total `p` with `φ(p) = m`. The NestSite family is not of
    /// profile form and has no closed-form inverse.
    pub(crate) fn profile_inverse(&self, m: f64) -> Result<f64> {
        match self.family {
            KernelFamily::Logistic { k_cap } => Ok(k_cap * (1.0 - m)),
            KernelFamily::BevertonHolt { c } => Ok(c * (1.0 / m - 1.0)),
            KernelFamily::Ricker { c } => Ok(-m.ln() / c),
            KernelFamily::NestSite { .. } => Err(Error::KernelNotInvertible),
        }
    }

    /// Analytic `∂f/∂x_j` at a point of the kernel's current branch. On the
    /// constant branches (nest-site below capacity, clamped region) the
    /// gradient is zero.
    pub(crate) fn gradient(&self, b: &[f64], x: &[f64], j: usize) -> f64 {
        match self.family {
            KernelFamily::Logistic { k_cap } => {
                if self.raw_value(b, x) < 0.0 {
                    0.0
                } else {
                    -self.weight(j) / k_cap
                }
            }
            KernelFamily::BevertonHolt { c } => {
                let s = self.weighted_total(x);
                -c * self.weight(j) / ((c + s) * (c + s))
            }
            KernelFamily::Ricker { c } => {
                let s = self.weighted_total(x);
                -c * self.weight(j) * (-c * s).exp()
            }
            KernelFamily::NestSite { k_cap } => match self.branch(b, x) {
                0 | 2 => 0.0,
                _ => {
                    // On the decreasing branch f = (K - Σx)/(Σ b_i x_i):
                    // ∂f/∂x_j = -(Σ b_i x_i + (K - Σx) b_j) / (Σ b_i x_i)².
                    let total: f64 = x.iter().sum();
                    let offspring: f64 = x.iter().zip(b).map(|(xi, bi)| bi * xi).sum();
                    -(offspring + (k_cap - total) * b[j]) / (offspring * offspring)
                }
            },
        }
    }

    /// Analytic `∂f/∂x_j` at the axis point `y e_r` (smooth branch).
    pub(crate) fn axis_derivative(&self, b: &[f64], r: usize, j: usize, y: f64) -> f64 {
        let mut axis = vec![0.0; b.len()];
        axis[r] = y;
        self.gradient(b, &axis, j)
    }

    fn validate(&self, k: usize) -> Result<()> {
        let (name, value) = self.family.param();
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonpositiveKernelParam { name, value });
        }
        if let Some(w) = &self.weights {
            if matches!(self.family, KernelFamily::NestSite { .. }) {
                return Err(Error::InvalidArgument(
                    "the nest_site kernel does not take weights".into(),
                ));
            }
            if w.len() != k {
                return Err(Error::DimensionMismatch {
                    what: "weights",
                    expected: k,
                    got: w.len(),
                });
            }
            for &wi in w {
                if !(wi > 0.0 && wi.is_finite()) {
                    return Err(Error::NonpositiveKernelParam {
                        name: "weights",
                        value: wi,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Nonnegative population state of length `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<f64>);

impl StateVector {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        for (index, &value) in x.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidState { index, value });
            }
        }
        Ok(Self(x))
    }

    /// Zero state of length `k`.
    pub fn zeros(k: usize) -> Self {
        Self(vec![0.0; k])
    }

    /// Axis state `y e_r` (0-based `r`).
    pub fn axis(k: usize, r: usize, y: f64) -> Result<Self> {
        if r >= k {
            return Err(Error::IndexOutOfRange { index: r, len: k });
        }
        let mut x = vec![0.0; k];
        x[r] = y;
        Self::new(x)
    }

    /// Builds without the nonnegativity check; reserved for values produced
    /// by the map itself.
    pub(crate) fn from_raw(x: Vec<f64>) -> Self {
        Self(x)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// Total size `Σ x_i`.
    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Componentwise sup-norm distance to `other`.
    pub fn max_distance(&self, other: &StateVector) -> f64 {
        self.0
            .iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for StateVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// A validated competition model: `k` strategies plus a suppression kernel.
/// The single source of truth for every analysis in this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct CompetitionModel {
    strategies: StrategyParams,
    kernel: SuppressionKernel,
}

impl CompetitionModel {
    /// Validates and builds a discrete-time model: `0 < d_i ≤ 1`, `d_i < b_i`,
    /// positive kernel parameters, matching vector lengths.
    pub fn new(b: Vec<f64>, d: Vec<f64>, kernel: SuppressionKernel) -> Result<Self> {
        Self::build(b, d, kernel, true)
    }

    /// Builds a continuous-time rate model. The cap `d_i ≤ 1` is specific to
    /// the discrete map (survival probabilities) and is waived here; `d_i > 0`
    /// and `b_i > d_i` still hold.
    pub fn new_continuous(b: Vec<f64>, d: Vec<f64>, kernel: SuppressionKernel) -> Result<Self> {
        Self::build(b, d, kernel, false)
    }

    fn build(b: Vec<f64>, d: Vec<f64>, kernel: SuppressionKernel, discrete: bool) -> Result<Self> {
        if b.len() != d.len() || b.is_empty() {
            return Err(Error::DimensionMismatch {
                what: "d",
                expected: b.len().max(1),
                got: d.len(),
            });
        }
        for (index, &value) in d.iter().enumerate() {
            let ok = if discrete {
                value > 0.0 && value <= 1.0
            } else {
                value > 0.0 && value.is_finite()
            };
            if !ok {
                return Err(Error::DeathRateOutOfRange { index, value });
            }
        }
        for (index, (&birth, &death)) in b.iter().zip(&d).enumerate() {
            if !(birth > death && birth.is_finite()) {
                return Err(Error::BirthNotExceedDeath {
                    index,
                    birth,
                    death,
                });
            }
        }
        kernel.validate(b.len())?;
        Ok(Self {
            strategies: StrategyParams { b, d },
            kernel,
        })
    }

    /// Number of strategies.
    pub fn k(&self) -> usize {
        self.strategies.b.len()
    }

    pub fn strategies(&self) -> &StrategyParams {
        &self.strategies
    }

    pub fn b(&self) -> &[f64] {
        &self.strategies.b
    }

    pub fn d(&self) -> &[f64] {
        &self.strategies.d
    }

    pub fn kernel(&self) -> &SuppressionKernel {
        &self.kernel
    }

    fn check_len(&self, len: usize, what: &'static str) -> Result<()> {
        if len != self.k() {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.k(),
                got: len,
            });
        }
        Ok(())
    }

    /// Suppression factor `f(x) ∈ [0, 1]`.
    pub fn suppression(&self, state: &StateVector) -> Result<f64> {
        self.check_len(state.len(), "state")?;
        Ok(self.kernel.value(&self.strategies.b, state.as_slice()))
    }

    pub(crate) fn suppression_slice(&self, x: &[f64]) -> f64 {
        self.kernel.value(&self.strategies.b, x)
    }

    /// One step of the map on a raw slice. The suppression factor is
    /// evaluated once and shared by all components.
    pub(crate) fn step_slice(&self, x: &[f64]) -> Vec<f64> {
        let f = self.suppression_slice(x);
        x.iter()
            .zip(self.strategies.b.iter().zip(&self.strategies.d))
            .map(|(&xi, (&bi, &di))| (1.0 - di) * xi + bi * f * xi)
            .collect()
    }

    /// One step of the discrete map: `T_i(x) = (1 - d_i) x_i + b_i f(x) x_i`.
    /// Nonnegativity is preserved (both terms are products of nonnegative
    /// factors when `d_i ≤ 1`).
    pub fn step(&self, state: &StateVector) -> Result<StateVector> {
        self.check_len(state.len(), "state")?;
        Ok(StateVector::from_raw(self.step_slice(state.as_slice())))
    }

    /// The reduced one-dimensional map on axis `r` (0-based):
    /// `S_r(y) = (1 - d_r) y + b_r y f(y e_r)`. Computed by applying the full
    /// map to the axis state, so the two maps agree on axis states exactly.
    pub fn reduced_map(&self, r: usize, y: f64) -> Result<f64> {
        if r >= self.k() {
            return Err(Error::IndexOutOfRange {
                index: r,
                len: self.k(),
            });
        }
        if !(y >= 0.0 && y.is_finite()) {
            return Err(Error::InvalidState { index: r, value: y });
        }
        let mut x = vec![0.0; self.k()];
        x[r] = y;
        Ok(self.step_slice(&x)[r])
    }
}
