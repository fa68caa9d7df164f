//! Construction, existence decisions, and verification of period-2 orbits of
//! the two-strategy map.
//!
//! Past the exclusion boundary (`α > 1 + β`, i.e. `γ < 0`) there is a unique
//! `θ > 1` with `(α θ + γ)(α θ⁻¹ + γ) = 1`. A genuine interior period-2
//! orbit `P ↔ Q` must then have coordinate ratios `q_2/p_2 = θ` and
//! `q_1/p_1 = α θ + γ`, and its kernel levels are pinned:
//! `f(P) = m_1 = (θ + d_2 - 1)/b_2`, `f(Q) = m_2 = (θ⁻¹ + d_2 - 1)/b_2`.
//! For kernels with an invertible decreasing profile `φ` this reduces to a
//! linear system for the orbit coordinates, solvable exactly when
//! `p_1 θ < p_2 < p_1 (α θ + γ)` with `p_i = φ⁻¹(m_i)`.
//!
//! [`search_period2`] is an independent oracle: a Newton iteration on
//! `T²(x) - x` started from a jittered grid, with no knowledge of the
//! closed-form pipeline.

use serde::Serialize;

use crate::equilibria::numeric_jacobian_slice;
use crate::exclusion::{pair_coefficients, turnover};
use crate::model::{CompetitionModel, KernelFamily, StateVector};
use crate::rng::SplitMix64;
use crate::simulate::invariant_bound;
use crate::{Error, Result};

/// Root `θ > 1` of `θ + θ⁻¹ = L`, with the reciprocal root alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theta {
    pub value: f64,
    pub inverse: f64,
    /// `L = (α² + γ² - 1) / (α |γ|)`.
    pub l: f64,
}

/// Solves `(α θ + γ)(α θ⁻¹ + γ) = 1` for `θ > 1`. Requires `γ < 0` and
/// `α + γ > 1` (equivalently `α > 1 + β` and `β > 0`), which force `L > 2`.
///
/// `L - 2` is computed as `(α + γ - 1)(α + γ + 1) / (α |γ|)`, which stays
/// accurate when `β` is tiny and `L` sits just above 2. The reciprocal root
/// is `1/θ` (the stable small-root form `2 / (L + √(L² - 4))`): subtracting
/// `L - θ` instead loses half the digits once `γ` is close to 0 and `L` is
/// large, since the small root is ~`1/L` while the cancellation error is
/// ~`ε L`.
pub fn solve_theta(alpha: f64, gamma: f64) -> Result<Theta> {
    let s = alpha + gamma;
    if !(alpha > 0.0 && alpha.is_finite() && gamma < 0.0 && s > 1.0) {
        return Err(Error::NoTheta { alpha, gamma });
    }
    let l_minus_2 = (s - 1.0) * (s + 1.0) / (alpha * -gamma);
    let l = 2.0 + l_minus_2;
    let disc = l_minus_2 * (l + 2.0);
    let value = 1.0 + 0.5 * (l_minus_2 + disc.sqrt());
    Ok(Theta {
        value,
        inverse: 1.0 / value,
        l,
    })
}

/// Both multiplier bounds `θ < 1 + b_2 - d_2` and `θ < (1 - d_2)⁻¹`; the
/// second is vacuous at `d_2 = 1`.
pub fn necessary_condition(theta: f64, b2: f64, d2: f64) -> bool {
    theta < 1.0 + b2 - d2 && (d2 >= 1.0 || theta < 1.0 / (1.0 - d2))
}

/// The first pipeline condition an orbit construction fails, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoOrbitReason {
    /// `α ≤ 1 + β`: no `θ > 1` exists.
    NoTheta,
    /// `θ` violates a multiplier bound, so no kernel level in `(0, 1)` can
    /// realize it.
    MultiplierBounds,
    /// A kernel level `m_i` escapes the open unit interval.
    MRange,
    /// The level totals violate `p_1 θ < p_2 < p_1 (α θ + γ)`: the linear
    /// system for the orbit coordinates has no positive solution.
    PInterval,
}

impl NoOrbitReason {
    pub fn as_str(self) -> &'static str {
        match self {
            NoOrbitReason::NoTheta => "no-theta",
            NoOrbitReason::MultiplierBounds => "multiplier-bounds",
            NoOrbitReason::MRange => "m-range",
            NoOrbitReason::PInterval => "p-interval",
        }
    }
}

/// Pipeline conditions echoed on success (both hold by construction).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrbitConditions {
    pub multiplier_bounds: bool,
    pub p_interval: bool,
}

/// A constructed period-2 orbit with its intermediates and a verification
/// residual (sup-norm defect of `T²` at both points).
#[derive(Debug, Clone, Serialize)]
pub struct PeriodTwoOrbit {
    pub theta: f64,
    pub theta_inv: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "odd")]
    pub point_odd: StateVector,
    #[serde(rename = "even")]
    pub point_even: StateVector,
    pub m1: f64,
    pub m2: f64,
    pub p1: f64,
    pub p2: f64,
    pub residual: f64,
    pub conditions: OrbitConditions,
}

/// Outcome of [`construct_period2`]: either the orbit or the first pipeline
/// condition that rules one out.
#[derive(Debug, Clone)]
pub enum Period2Outcome {
    Orbit(PeriodTwoOrbit),
    NoOrbit(NoOrbitReason),
}

impl Period2Outcome {
    pub fn orbit(&self) -> Option<&PeriodTwoOrbit> {
        match self {
            Period2Outcome::Orbit(o) => Some(o),
            Period2Outcome::NoOrbit(_) => None,
        }
    }

    pub fn failure(&self) -> Option<NoOrbitReason> {
        match self {
            Period2Outcome::Orbit(_) => None,
            Period2Outcome::NoOrbit(r) => Some(*r),
        }
    }
}

/// Runs the closed-form pipeline for a two-strategy model with a profile
/// kernel. Strategies are relabeled internally so the dominant one leads;
/// the returned points use the model's original coordinate order.
pub fn construct_period2(model: &CompetitionModel) -> Result<Period2Outcome> {
    if model.k() != 2 {
        return Err(Error::DimensionMismatch {
            what: "strategies",
            expected: 2,
            got: model.k(),
        });
    }
    if matches!(model.kernel().family(), KernelFamily::NestSite { .. }) {
        return Err(Error::KernelNotInvertible);
    }
    let l = turnover(model.strategies())?;
    let (i1, i2) = if l[0] > l[1] { (0, 1) } else { (1, 0) };
    let (b, d) = (model.b(), model.d());
    let (b2, d2) = (b[i2], d[i2]);
    let coeff = pair_coefficients(b[i1], d[i1], b2, d2)?;

    let theta = match solve_theta(coeff.alpha, coeff.gamma) {
        Ok(t) => t,
        Err(Error::NoTheta { .. }) => return Ok(Period2Outcome::NoOrbit(NoOrbitReason::NoTheta)),
        Err(e) => return Err(e),
    };
    if !necessary_condition(theta.value, b2, d2) {
        return Ok(Period2Outcome::NoOrbit(NoOrbitReason::MultiplierBounds));
    }

    let m1 = (theta.value + d2 - 1.0) / b2;
    let m2 = (theta.inverse + d2 - 1.0) / b2;
    if !(0.0 < m1 && m1 < 1.0 && 0.0 < m2 && m2 < 1.0) {
        return Ok(Period2Outcome::NoOrbit(NoOrbitReason::MRange));
    }

    let kernel = model.kernel();
    let p1 = kernel.profile_inverse(m1)?;
    let p2 = kernel.profile_inverse(m2)?;
    let mult = coeff.alpha * theta.value + coeff.gamma;
    // mult - θ = (α - 1)(θ - 1) + β > 0, so positivity of the solution is
    // exactly the interval condition p1 θ < p2 < p1 mult.
    let denom = mult - theta.value;
    let scaled_c1 = (p2 - p1 * theta.value) / denom;
    let scaled_c2 = (p1 * mult - p2) / denom;
    if !(scaled_c1 > 0.0 && scaled_c2 > 0.0) {
        return Ok(Period2Outcome::NoOrbit(NoOrbitReason::PInterval));
    }
    let c1 = scaled_c1 / kernel.weight(i1);
    let c2 = scaled_c2 / kernel.weight(i2);

    let mut odd = vec![0.0; 2];
    let mut even = vec![0.0; 2];
    odd[i1] = c1;
    odd[i2] = c2;
    even[i1] = c1 * mult;
    even[i2] = c2 * theta.value;
    let point_odd = StateVector::new(odd)?;
    let point_even = StateVector::new(even)?;
    let residual = verify_orbit(model, &point_odd, &point_even)?;

    Ok(Period2Outcome::Orbit(PeriodTwoOrbit {
        theta: theta.value,
        theta_inv: theta.inverse,
        c1,
        c2,
        point_odd,
        point_even,
        m1,
        m2,
        p1,
        p2,
        residual,
        conditions: OrbitConditions {
            multiplier_bounds: true,
            p_interval: true,
        },
    }))
}

/// `max(‖T(p) - q‖∞, ‖T(q) - p‖∞)`: zero exactly on a period-2 orbit (or a
/// shared fixed point).
pub fn verify_orbit(model: &CompetitionModel, p: &StateVector, q: &StateVector) -> Result<f64> {
    let tp = model.step(p)?;
    let tq = model.step(q)?;
    Ok(tp.max_distance(q).max(tq.max_distance(p)))
}

/// One period-2 orbit found by the search oracle. `point` is the
/// lexicographically smaller of the two orbit points and `image` its map
/// image.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitPair {
    pub point: StateVector,
    pub image: StateVector,
    pub residual: f64,
}

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_STEP_TOL: f64 = 1e-12;
const NEWTON_FD_STEP: f64 = 1e-7;
const ORBIT_RESIDUAL_TOL: f64 = 1e-10;
const INTERIOR_FLOOR: f64 = 1e-6;
const FIXED_POINT_GAP: f64 = 1e-8;
const DEDUP_TOL: f64 = 1e-6;

fn t2(model: &CompetitionModel, x: &[f64]) -> Vec<f64> {
    model.step_slice(&model.step_slice(x))
}

fn newton_period2(model: &CompetitionModel, start: [f64; 2], radius: f64) -> Option<[f64; 2]> {
    let mut x = start;
    for _ in 0..NEWTON_MAX_ITER {
        if !x.iter().all(|v| v.is_finite()) || x.iter().any(|v| v.abs() > radius) {
            return None;
        }
        let fx = t2(model, &x);
        let residual = [fx[0] - x[0], fx[1] - x[1]];

        // Jacobian of T² by the chain rule on central-difference Jacobians.
        let j1 = numeric_jacobian_slice(model, &x, NEWTON_FD_STEP).ok()?;
        let tx = model.step_slice(&x);
        let j2 = numeric_jacobian_slice(model, &tx, NEWTON_FD_STEP).ok()?;
        let mut j = [[0.0; 2]; 2];
        for i in 0..2 {
            for k in 0..2 {
                j[i][k] =
                    j2[i * 2] * j1[k] + j2[i * 2 + 1] * j1[2 + k] - f64::from(u8::from(i == k));
            }
        }

        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            return None;
        }
        let dx = [
            (residual[0] * j[1][1] - residual[1] * j[0][1]) / det,
            (residual[1] * j[0][0] - residual[0] * j[1][0]) / det,
        ];
        x = [x[0] - dx[0], x[1] - dx[1]];
        if dx[0].abs().max(dx[1].abs()) < NEWTON_STEP_TOL {
            return Some(x);
        }
    }
    None
}

/// Newton search for interior period-2 orbits from a jittered `grid × grid`
/// of starting points inside the invariant simplex. Deterministic for a
/// given seed and grid; fixed points of `T` and near-axis solutions are
/// filtered out, duplicates merged, and the result ordered lexicographically.
///
/// Any period-2 orbit has kernel levels above `min_i d_i / b_i`, so its
/// points live inside the radius-`M` simplex; the grid therefore spans `M`
/// rather than the bigger invariance radius, alternating linear and
/// logarithmic spacing per index to reach orbits with one tiny coordinate.
pub fn search_period2(model: &CompetitionModel, grid: usize, seed: u64) -> Result<Vec<OrbitPair>> {
    if model.k() != 2 {
        return Err(Error::DimensionMismatch {
            what: "strategies",
            expected: 2,
            got: model.k(),
        });
    }
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let region = invariant_bound(model);
    let scale = region.m / model.kernel().min_weight();
    let radius = 10.0 * region.m_bar + 10.0;
    let axis_value = |idx: usize, jitter: f64| {
        let u = (idx as f64 + 0.5 + 0.3 * (jitter - 0.5)) / grid as f64;
        if idx.is_multiple_of(2) {
            u * scale
        } else {
            scale * 1e-4f64.powf(1.0 - u)
        }
    };
    let mut found: Vec<OrbitPair> = Vec::new();

    for i in 0..grid {
        for j in 0..grid {
            let mut rng = SplitMix64::new(
                seed ^ ((i as u64) << 32 | j as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            );
            let start = [axis_value(i, rng.next_f64()), axis_value(j, rng.next_f64())];
            if start[0] + start[1] > region.m_bar {
                continue;
            }
            let Some(root) = newton_period2(model, start, radius) else {
                continue;
            };
            if !root.iter().all(|v| v.is_finite() && *v > INTERIOR_FLOOR) {
                continue;
            }
            let fx = t2(model, &root);
            let residual = (fx[0] - root[0]).abs().max((fx[1] - root[1]).abs());
            if residual > ORBIT_RESIDUAL_TOL {
                continue;
            }
            let image = model.step_slice(&root);
            let moved = (image[0] - root[0]).abs().max((image[1] - root[1]).abs());
            if moved <= FIXED_POINT_GAP {
                continue;
            }
            if image.iter().any(|v| *v <= INTERIOR_FLOOR) {
                continue;
            }
            let (point, image) = if root.to_vec() <= image {
                (root.to_vec(), image)
            } else {
                (image, root.to_vec())
            };
            let duplicate = found.iter().any(|o| {
                point
                    .iter()
                    .zip(o.point.iter())
                    .all(|(a, b)| (a - b).abs() < DEDUP_TOL)
            });
            if duplicate {
                continue;
            }
            found.push(OrbitPair {
                point: StateVector::new(point)?,
                image: StateVector::new(image)?,
                residual,
            });
        }
    }
    found.sort_by(|a, b| {
        a.point
            .as_slice()
            .partial_cmp(b.point.as_slice())
            .expect("orbit points are finite")
    });
    Ok(found)
}

/// Family-specific leading-order feasibility condition for small `β`,
/// reported with its margins. A heuristic only: [`construct_period2`] is the
/// authority on orbit existence for a concrete model.
#[derive(Debug, Clone, Serialize)]
pub struct Feasibility {
    pub family: &'static str,
    /// Human-readable form of the inequality pair being margined.
    pub condition: &'static str,
    pub lower_margin: f64,
    pub upper_margin: f64,
    pub holds: bool,
}

/// Evaluates the small-`β` feasibility window `A < -2 B / b_2 < α A` in its
/// family-specific form, where `A = φ⁻¹(d_2/b_2)` and `B = 1/φ'(A)`.
pub fn asymptotic_feasibility(model: &CompetitionModel) -> Result<Feasibility> {
    if model.k() != 2 {
        return Err(Error::DimensionMismatch {
            what: "strategies",
            expected: 2,
            got: model.k(),
        });
    }
    let l = turnover(model.strategies())?;
    let (i1, i2) = if l[0] > l[1] { (0, 1) } else { (1, 0) };
    let (b, d) = (model.b(), model.d());
    let (b1, b2, d2) = (b[i1], b[i2], d[i2]);
    let alpha = b1 / b2;

    let (family, condition, lower_margin, upper_margin) = match model.kernel().family() {
        KernelFamily::Logistic { .. } => (
            "logistic",
            "2 b2 / b1 < b2 - d2 < 2",
            (b2 - d2) - 2.0 * b2 / b1,
            2.0 - (b2 - d2),
        ),
        KernelFamily::BevertonHolt { .. } => (
            "beverton_holt",
            "b2 - d2 < 2 b2 / d2 < alpha (b2 - d2)",
            2.0 * b2 / d2 - (b2 - d2),
            alpha * (b2 - d2) - 2.0 * b2 / d2,
        ),
        KernelFamily::Ricker { .. } => (
            "ricker",
            "d2 exp(2/(alpha d2)) < b2 < d2 exp(2/d2)",
            b2 - d2 * (2.0 / (alpha * d2)).exp(),
            d2 * (2.0 / d2).exp() - b2,
        ),
        KernelFamily::NestSite { .. } => return Err(Error::KernelNotInvertible),
    };
    Ok(Feasibility {
        family,
        condition,
        lower_margin,
        upper_margin,
        holds: lower_margin > 0.0 && upper_margin > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SuppressionKernel;

    fn logistic(b: Vec<f64>, d: Vec<f64>) -> CompetitionModel {
        CompetitionModel::new(b, d, SuppressionKernel::logistic(1.0)).unwrap()
    }

    /// Bisection oracle for θ + 1/θ = L, independent of the quadratic route.
    fn theta_by_bisection(l: f64) -> f64 {
        let (mut lo, mut hi) = (1.0, l);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid + 1.0 / mid < l {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn theta_reference_values() {
        let t = solve_theta(4.0, -2.9999).unwrap();
        assert!((t.value - 1.004_091_0).abs() < 1e-6, "theta {}", t.value);
        assert!((t.value - theta_by_bisection(t.l)).abs() < 1e-12);

        let t = solve_theta(4.0, -2.8).unwrap();
        assert!((t.value - 1.218_820_1).abs() < 1e-6, "theta {}", t.value);
        assert!((t.value - theta_by_bisection(t.l)).abs() < 1e-12);
    }

    #[test]
    fn theta_identity_and_inverse() {
        let t = solve_theta(4.0, -2.8).unwrap();
        let identity = (4.0 * t.value - 2.8) * (4.0 * t.inverse - 2.8);
        assert!((identity - 1.0).abs() < 1e-12);
        assert!((t.value * t.inverse - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theta_inverse_agrees_with_root_sum_route() {
        // For moderate L the two small-root routes 1/θ and L - θ agree; the
        // subtraction route is only kept as a cross-check because it
        // degrades once L is large.
        let mut rng = crate::rng::SplitMix64::new(3);
        for _ in 0..1000 {
            let alpha = rng.log_range(1.01, 8.0);
            let beta = (alpha - 1.0) * rng.range(0.01, 0.9);
            let t = solve_theta(alpha, beta + 1.0 - alpha).unwrap();
            if t.l < 50.0 {
                assert!(((t.l - t.value) - t.inverse).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn theta_degenerates_at_the_boundary() {
        // β → 0⁺ sends L → 2 and θ → 1.
        let alpha = 4.0;
        let beta = 1e-12;
        let t = solve_theta(alpha, beta + 1.0 - alpha).unwrap();
        assert!(t.value > 1.0);
        assert!(t.value - 1.0 < 1e-5);

        assert!(matches!(
            solve_theta(1.2, 0.5 + 1.0 - 1.2),
            Err(Error::NoTheta { .. })
        ));
    }

    #[test]
    fn necessary_condition_cases() {
        assert!(necessary_condition(1.218_821, 1.0, 0.3));
        assert!(!necessary_condition(1.5, 0.8, 0.4));
        assert!(necessary_condition(1.5, 1.0, 0.4));
        // d2 = 1 silences the second bound.
        assert!(necessary_condition(2.5, 3.0, 1.0));
        assert!(!necessary_condition(3.0, 3.0, 1.0));
    }

    #[test]
    fn constructs_reference_orbit() {
        let model = logistic(vec![4.0, 1.0], vec![1.0, 0.3]);
        let orbit = construct_period2(&model).unwrap();
        let orbit = orbit.orbit().expect("orbit exists");
        assert!((orbit.theta - 1.218_820_054_940).abs() < 1e-11);
        assert!((orbit.c1 - 0.342_178_872_5).abs() < 1e-9, "c1 {}", orbit.c1);
        assert!((orbit.c2 - 0.139_001_072_5).abs() < 1e-9, "c2 {}", orbit.c2);
        assert!((orbit.point_even[0] - 0.710_117_045_8).abs() < 1e-9);
        assert!((orbit.point_even[1] - 0.169_417_294_8).abs() < 1e-9);
        assert!((orbit.p1 - 0.481_179_945_1).abs() < 1e-9);
        assert!((orbit.p2 - 0.879_534_340_7).abs() < 1e-9);
        assert!(orbit.residual < 1e-10);

        // The two points exchange under the map.
        let fwd = model.step(&orbit.point_odd).unwrap();
        assert!(fwd.max_distance(&orbit.point_even) < 1e-9);
        let back = model.step(&orbit.point_even).unwrap();
        assert!(back.max_distance(&orbit.point_odd) < 1e-9);

        // Level sums: with unit weights c1 + c2 = p1 and the even point sums
        // to p2.
        assert!((orbit.c1 + orbit.c2 - orbit.p1).abs() < 1e-12);
        assert!((orbit.point_even.total() - orbit.p2).abs() < 1e-12);
    }

    #[test]
    fn construct_rejects_non_two_strategy_and_nest_site() {
        let m = logistic(vec![4.0, 2.0, 1.0], vec![0.8, 0.5, 0.3]);
        assert!(matches!(
            construct_period2(&m),
            Err(Error::DimensionMismatch { .. })
        ));
        let m = CompetitionModel::new(
            vec![2.0, 1.5],
            vec![0.5, 0.6],
            SuppressionKernel::nest_site(1.0),
        )
        .unwrap();
        assert!(matches!(
            construct_period2(&m),
            Err(Error::KernelNotInvertible)
        ));
    }

    #[test]
    fn construct_handles_unsorted_strategies() {
        // The same model with strategies swapped produces the mirrored orbit.
        let sorted = construct_period2(&logistic(vec![4.0, 1.0], vec![1.0, 0.3])).unwrap();
        let swapped = construct_period2(&logistic(vec![1.0, 4.0], vec![0.3, 1.0])).unwrap();
        let (a, b) = (sorted.orbit().unwrap(), swapped.orbit().unwrap());
        assert!((a.point_odd[0] - b.point_odd[1]).abs() < 1e-14);
        assert!((a.point_odd[1] - b.point_odd[0]).abs() < 1e-14);
    }

    #[test]
    fn excluded_pair_has_no_theta() {
        let m = logistic(vec![2.0, 3.0], vec![0.5, 0.9]);
        let outcome = construct_period2(&m).unwrap();
        assert_eq!(outcome.failure(), Some(NoOrbitReason::NoTheta));
    }

    #[test]
    fn oversized_theta_fails_the_multiplier_bounds() {
        // gamma = -0.1 puts theta near 37, far above 1 + b2 - d2.
        let m = logistic(vec![4.0, 1.0], vec![1.0, 0.975]);
        let outcome = construct_period2(&m).unwrap();
        assert_eq!(outcome.failure(), Some(NoOrbitReason::MultiplierBounds));
    }

    #[test]
    fn weighted_kernel_orbit_closes() {
        let kernel = SuppressionKernel::with_weights(
            crate::model::KernelFamily::Logistic { k_cap: 1.0 },
            vec![2.0, 0.5],
        );
        let m = CompetitionModel::new(vec![4.0, 1.0], vec![1.0, 0.3], kernel).unwrap();
        let outcome = construct_period2(&m).unwrap();
        let orbit = outcome.orbit().expect("weighted orbit exists");
        assert!(orbit.residual < 1e-10);
        // Weighted totals hit the level values.
        let total = |s: &StateVector| 2.0 * s[0] + 0.5 * s[1];
        assert!((total(&orbit.point_odd) - orbit.p1).abs() < 1e-12);
        assert!((total(&orbit.point_even) - orbit.p2).abs() < 1e-12);
        let found = search_period2(&m, 30, 0).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].point.max_distance(&orbit.point_odd) < 1e-8);
    }

    #[test]
    fn verify_orbit_cases() {
        let model = logistic(vec![4.0, 1.0], vec![1.0, 0.3]);
        let fp = StateVector::new(vec![0.75, 0.0]).unwrap();
        assert!(verify_orbit(&model, &fp, &fp).unwrap() < 1e-15);

        let orbit = construct_period2(&model).unwrap();
        let orbit = orbit.orbit().unwrap();
        assert!(verify_orbit(&model, &orbit.point_odd, &orbit.point_even).unwrap() < 1e-10);

        let perturbed =
            StateVector::new(vec![orbit.point_odd[0] + 0.01, orbit.point_odd[1]]).unwrap();
        assert!(verify_orbit(&model, &perturbed, &orbit.point_even).unwrap() > 1e-3);
    }

    #[test]
    fn search_finds_the_unique_interior_orbit() {
        let model = logistic(vec![4.0, 1.0], vec![1.0, 0.3]);
        let orbits = search_period2(&model, 30, 0).unwrap();
        assert_eq!(orbits.len(), 1, "found {} orbits", orbits.len());
        let constructed = construct_period2(&model).unwrap();
        let constructed = constructed.orbit().unwrap();
        let gap = orbits[0]
            .point
            .max_distance(&constructed.point_odd)
            .min(orbits[0].point.max_distance(&constructed.point_even));
        assert!(gap < 1e-8, "oracle disagrees by {gap}");
    }

    #[test]
    fn search_is_deterministic() {
        let model = logistic(vec![4.0, 1.0], vec![1.0, 0.3]);
        let a = search_period2(&model, 12, 7).unwrap();
        let b = search_period2(&model, 12, 7).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.point[0].to_bits(), y.point[0].to_bits());
            assert_eq!(x.point[1].to_bits(), y.point[1].to_bits());
        }
    }

    #[test]
    fn search_empty_for_excluded_and_stable_models() {
        let m = logistic(vec![2.0, 3.0], vec![0.5, 0.9]);
        assert!(search_period2(&m, 24, 0).unwrap().is_empty());
        // Stable one-strategy dynamics embedded on an axis.
        let m = logistic(vec![1.8, 1.2], vec![0.5, 0.9]);
        assert!(search_period2(&m, 24, 0).unwrap().is_empty());
    }

    #[test]
    fn orbit_ratios_satisfy_the_recurrence_linkage() {
        let model = logistic(vec![4.0, 1.0], vec![1.0, 0.3]);
        let orbit = construct_period2(&model).unwrap();
        let o = orbit.orbit().unwrap();
        let coeff = pair_coefficients(4.0, 1.0, 1.0, 0.3).unwrap();
        let r1 = o.point_even[0] / o.point_odd[0];
        let r2 = o.point_even[1] / o.point_odd[1];
        assert!((r1 - (coeff.alpha * r2 + coeff.gamma)).abs() < 1e-12);
    }

    #[test]
    fn feasibility_margins() {
        // 2 b2/b1 = 0.5 < b2 - d2 = 0.7 < 2.
        let f = asymptotic_feasibility(&logistic(vec![4.0, 1.0], vec![1.0, 0.3])).unwrap();
        assert!(f.holds);
        assert!((f.lower_margin - 0.2).abs() < 1e-12);
        assert!((f.upper_margin - 1.3).abs() < 1e-12);

        // Fails the lower bound by 0.005.
        let f = asymptotic_feasibility(&logistic(vec![2.02, 0.505], vec![0.0399, 0.01])).unwrap();
        assert!(!f.holds);
        assert!((f.lower_margin + 0.005).abs() < 1e-12);

        // Ricker window d2 e^{2/(α d2)} < b2 < d2 e^{2/d2}.
        let e2 = std::f64::consts::E.powi(2);
        let b1 = 1.0001 * e2;
        let m = CompetitionModel::new(
            vec![b1, b1 / 4.0],
            vec![0.9999, 0.25],
            SuppressionKernel::ricker(1.0),
        )
        .unwrap();
        let f = asymptotic_feasibility(&m).unwrap();
        assert!(f.holds);
        assert!(f.lower_margin > 0.0 && f.lower_margin < 3e-4);
    }
}
