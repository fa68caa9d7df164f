//! Turnover coefficients, the pairwise competitive-exclusion criterion,
//! period-two counterexample sequences, the product-minimum inequality used
//! to prove the criterion, and Euler dynamical-consistency checks.
//!
//! For a pair of strategies with `L_1 > L_i` the coefficients are
//! `α = b_1 / b_i`, `β = α d_i - d_1 > 0`, `γ = β + 1 - α`. The exclusion
//! verdict for the pair is `α ≤ 1 + β` (equivalently `γ ≥ 0`); past that
//! boundary bounded positive period-two sequences coupled by the growth
//! recurrence exist, so the sequence-level criterion cannot hold.

use serde::Serialize;

use crate::model::{CompetitionModel, StrategyParams};
use crate::periodic::solve_theta;
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Coefficients of the coupled growth recurrence for one pair of strategies.
/// Invariant: `alpha + gamma = 1 + beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl PairCoefficients {
    /// Builds coefficients directly from `(α, β)`, both positive.
    pub fn from_alpha_beta(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "alpha = {alpha} must be positive"
            )));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::NonpositiveBeta { beta });
        }
        Ok(Self {
            alpha,
            beta,
            gamma: beta + 1.0 - alpha,
        })
    }
}

/// Turnover coefficients `L_i = b_i / d_i`. Ties are an error: every
/// downstream predicate assumes a strict ordering.
pub fn turnover(params: &StrategyParams) -> Result<Vec<f64>> {
    let l: Vec<f64> = params
        .b()
        .iter()
        .zip(params.d())
        .map(|(b, d)| b / d)
        .collect();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            if l[i] == l[j] {
                return Err(Error::TiedTurnover { i, j });
            }
        }
    }
    Ok(l)
}

/// `(α, β, γ)` for a pair where strategy 1 has the strictly larger turnover.
pub fn pair_coefficients(b1: f64, d1: f64, bi: f64, di: f64) -> Result<PairCoefficients> {
    let alpha = b1 / bi;
    let beta = alpha * di - d1;
    if beta <= 0.0 {
        return Err(Error::NonpositiveBeta { beta });
    }
    Ok(PairCoefficients {
        alpha,
        beta,
        gamma: beta + 1.0 - alpha,
    })
}

/// Verdict for one pair (dominant strategy vs. strategy `i`).
#[derive(Debug, Clone, Serialize)]
pub struct PairVerdict {
    /// Strategy number (1-based, in the model's original order).
    #[serde(rename = "i")]
    pub strategy: usize,
    #[serde(flatten)]
    pub coefficients: PairCoefficients,
    /// `true` iff `α ≤ 1 + β`: every bounded positive solution of the
    /// coupled recurrence sends this strategy to zero.
    pub excluded: bool,
}

/// Pairwise exclusion verdicts against the dominant strategy.
///
/// A pair that is not excluded admits period-two sequences satisfying the
/// growth recurrence, but that alone does not prove coexistence for the
/// concrete model; the periodic module settles orbit existence per model.
#[derive(Debug, Clone, Serialize)]
pub struct ExclusionReport {
    /// Turnover coefficients in the model's original strategy order.
    #[serde(rename = "L")]
    pub turnover: Vec<f64>,
    /// 1-based number of the strategy with the largest turnover.
    pub dominant: usize,
    /// Pairs in descending-turnover order.
    pub pairs: Vec<PairVerdict>,
    /// Always false; tied turnovers are rejected before a report is built.
    pub ties: bool,
}

/// Sorts strategies by turnover (descending) and evaluates `α ≤ 1 + β` for
/// every pair against the dominant strategy.
pub fn exclusion_predicate(model: &CompetitionModel) -> Result<ExclusionReport> {
    let l = turnover(model.strategies())?;
    let mut order: Vec<usize> = (0..l.len()).collect();
    order.sort_by(|&a, &b| l[b].partial_cmp(&l[a]).expect("turnovers are finite"));
    let dom = order[0];
    let (b, d) = (model.b(), model.d());
    let pairs = order[1..]
        .iter()
        .map(|&i| {
            let coefficients = pair_coefficients(b[dom], d[dom], b[i], d[i])?;
            Ok(PairVerdict {
                strategy: i + 1,
                excluded: coefficients.alpha <= 1.0 + coefficients.beta,
                coefficients,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExclusionReport {
        turnover: l,
        dominant: dom + 1,
        pairs,
        ties: false,
    })
}

/// Period-two positive sequences `(u, v)` of length `n` satisfying the growth
/// recurrence exactly: `u` alternates `c1, c1 (α θ + γ)` and `v` alternates
/// `c2, c2 θ`. Exists only past the exclusion boundary (`α > 1 + β`).
pub fn counterexample_sequences(
    coeff: &PairCoefficients,
    c1: f64,
    c2: f64,
    n: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "c1 = {c1} and c2 = {c2} must be positive"
        )));
    }
    let theta = solve_theta(coeff.alpha, coeff.gamma)?;
    let u_even = c1 * (coeff.alpha * theta.value + coeff.gamma);
    let v_even = c2 * theta.value;
    let u = (0..n)
        .map(|i| if i % 2 == 0 { c1 } else { u_even })
        .collect();
    let v = (0..n)
        .map(|i| if i % 2 == 0 { c2 } else { v_even })
        .collect();
    Ok((u, v))
}

/// Max over `n` of `|(u_{n+1} - u_n)/u_n - α (v_{n+1} - v_n)/v_n - β|`.
/// Zero (to rounding) exactly when the pair satisfies the growth recurrence.
pub fn recurrence_residual(u: &[f64], v: &[f64], alpha: f64, beta: f64) -> Result<f64> {
    if u.len() != v.len() || u.len() < 2 {
        return Err(Error::DimensionMismatch {
            what: "sequences",
            expected: u.len().max(2),
            got: v.len(),
        });
    }
    let mut worst = 0.0f64;
    for i in 0..u.len() - 1 {
        let du = (u[i + 1] - u[i]) / u[i];
        let dv = (v[i + 1] - v[i]) / v[i];
        worst = worst.max((du - alpha * dv - beta).abs());
    }
    Ok(worst)
}

fn product_form(alpha: f64, gamma: f64, xs: &[f64]) -> f64 {
    xs.iter().map(|&x| alpha * x + gamma).product()
}

/// Checks the product-minimum inequality
/// `∏ (α x_i + γ) ≥ (α m^{1/n} + γ)^n` on the constraint surface
/// `x_1 ⋯ x_n = m` with `α > 0`, `γ ≥ 0`.
///
/// `samples` random points (log-uniform factors, last coordinate solved from
/// the constraint) are tested against the bound, and a multiplicative grid
/// around the symmetric point confirms it as a local minimum. The tolerance
/// is relative: products of up to six factors carry a few ulps of rounding.
pub fn lemma_min_check(alpha: f64, gamma: f64, n: usize, m: f64, samples: usize) -> Result<bool> {
    if !(alpha > 0.0 && alpha.is_finite()) || !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "requires alpha > 0 and gamma >= 0, got alpha = {alpha}, gamma = {gamma}"
        )));
    }
    if n == 0 || n > 6 {
        return Err(Error::InvalidArgument(format!("n = {n} must lie in 1..=6")));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidArgument(format!("m = {m} must be positive")));
    }

    let bound = (alpha * m.powf(1.0 / n as f64) + gamma).powi(n as i32);
    let slack = 1e-12 * bound.abs().max(1.0);

    let seed = alpha.to_bits()
        ^ gamma.to_bits().rotate_left(17)
        ^ m.to_bits().rotate_left(34)
        ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ samples as u64;
    let mut rng = SplitMix64::new(seed);

    let mut xs = vec![0.0; n];
    for _ in 0..samples {
        let mut prod = 1.0;
        for slot in xs.iter_mut().take(n - 1) {
            *slot = rng.log_range(0.1, 10.0);
            prod *= *slot;
        }
        xs[n - 1] = m / prod;
        if product_form(alpha, gamma, &xs) < bound - slack {
            return Ok(false);
        }
    }

    // Local refinement: five multiplicative offsets per free coordinate
    // around the symmetric point, the last coordinate restoring the product.
    let center = m.powf(1.0 / n as f64);
    let g_center = product_form(alpha, gamma, &vec![center; n]);
    if (g_center - bound).abs() > 1e-9 * bound.abs().max(1.0) {
        return Ok(false);
    }
    let offsets = [-0.05, -0.025, 0.0, 0.025, 0.05];
    let free = n - 1;
    let count = offsets.len().pow(free as u32);
    for idx in 0..count {
        let mut rest = idx;
        let mut prod = 1.0;
        for slot in xs.iter_mut().take(free) {
            *slot = center * (1.0 + offsets[rest % offsets.len()]);
            rest /= offsets.len();
            prod *= *slot;
        }
        xs[n - 1] = m / prod;
        if product_form(alpha, gamma, &xs) < g_center - slack {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An Euler discretization of continuous rates with step `h`.
#[derive(Debug, Clone, Serialize)]
pub struct EulerDiscretization {
    pub b_h: Vec<f64>,
    pub d_h: Vec<f64>,
    pub h: f64,
    /// Largest biologically meaningful step: `min_i 1 / d_i`.
    pub h_max: f64,
    /// `h ≤ h_max`; an oversized step is flagged, not rejected.
    pub valid: bool,
}

/// Scales continuous rates to the discrete map's parameters `(b_i h, d_i h)`.
pub fn euler_discretize(b: &[f64], d: &[f64], h: f64) -> Result<EulerDiscretization> {
    if b.len() != d.len() || b.is_empty() {
        return Err(Error::DimensionMismatch {
            what: "d",
            expected: b.len().max(1),
            got: d.len(),
        });
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("h = {h} must be positive")));
    }
    let h_max = d.iter().map(|di| 1.0 / di).fold(f64::INFINITY, f64::min);
    Ok(EulerDiscretization {
        b_h: b.iter().map(|bi| bi * h).collect(),
        d_h: d.iter().map(|di| di * h).collect(),
        h,
        h_max,
        valid: h <= h_max,
    })
}

/// Per-pair check `b_1 - b_i ≤ (b_1 d_i - b_i d_1) h`. When it holds for all
/// pairs and `h ≤ h_max`, the Euler scheme inherits the continuous system's
/// exclusion property (dynamical consistency for that property).
pub fn consistency_condition(b: &[f64], d: &[f64], h: f64) -> Result<Vec<bool>> {
    if b.len() != d.len() || b.len() < 2 {
        return Err(Error::DimensionMismatch {
            what: "d",
            expected: b.len().max(2),
            got: d.len(),
        });
    }
    (1..b.len())
        .map(|i| {
            let denom = b[0] * d[i] - b[i] * d[0];
            if denom <= 0.0 {
                return Err(Error::NonpositiveDenominator { i, value: denom });
            }
            Ok(b[0] - b[i] <= denom * h)
        })
        .collect()
}
