//! The `k + 1` axis fixed points of the map, their analytic eigenvalues,
//! finite-difference cross-checks, and stability classification.
//!
//! With a strict turnover ordering and strictly decreasing axis profiles the
//! map fixes the origin and one point per axis, `x*_r` solving
//! `f(x*_r) = d_r / b_r`. The Jacobian at `x*_r` has one non-trivial row, so
//! its eigenvalues sit on the diagonal:
//! `λ_i = 1 - d_i + b_i d_r / b_r` for `i ≠ r` and
//! `λ_r = 1 + b_r x_r ∂f/∂x_r(x*_r)`.

use serde::Serialize;

use crate::exclusion::turnover;
use crate::model::{CompetitionModel, KernelFamily, StateVector};
use crate::{Error, Result};

/// Default central-difference step for [`numeric_jacobian`].
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Stability classes of a fixed point. `Marginal` is reported when an
/// eigenvalue sits exactly on the unit circle: the linearization decides
/// nothing there, so no stability claim is made.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Repulsive,
    LocallyStable,
    SemiStable,
    Unstable,
    Marginal,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Repulsive => "repulsive",
            Classification::LocallyStable => "locally-stable",
            Classification::SemiStable => "semi-stable",
            Classification::Unstable => "unstable",
            Classification::Marginal => "marginal",
        }
    }
}

/// One fixed point with its spectrum and classification.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    /// 0 for the origin, otherwise the 1-based axis strategy number.
    pub r: usize,
    pub point: StateVector,
    pub eigenvalues: Vec<f64>,
    #[serde(rename = "class")]
    pub classification: Classification,
    /// `b_r x_r ∂f/∂x_r` at the point (0 at the origin).
    pub derivative_term: f64,
}

/// Coordinate of the axis-`r` fixed point (0-based `r`): the solution of
/// `f(y e_r) = d_r / b_r` on the decreasing part of the axis profile.
///
/// Profile families invert in closed form; the nest-site family is solved by
/// bisection on its decreasing branch.
pub fn axis_fixed_point(model: &CompetitionModel, r: usize) -> Result<f64> {
    if r >= model.k() {
        return Err(Error::IndexOutOfRange {
            index: r,
            len: model.k(),
        });
    }
    let mu = model.d()[r] / model.b()[r];
    let kernel = model.kernel();
    match kernel.family() {
        KernelFamily::NestSite { k_cap } => {
            // The decreasing branch starts at the kink K / (1 + b_r) where the
            // profile leaves 1 and falls to 0 at K.
            let mut lo = k_cap / (1.0 + model.b()[r]);
            let mut hi = *k_cap;
            let mut axis = vec![0.0; model.k()];
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                axis[r] = mid;
                if model.suppression_slice(&axis) > mu {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= f64::EPSILON * hi {
                    break;
                }
            }
            Ok(0.5 * (lo + hi))
        }
        _ => Ok(kernel.profile_inverse(mu)? / kernel.weight(r)),
    }
}

/// Eigenvalues of the Jacobian at fixed point `r` (0 = origin, else 1-based
/// axis number), from the closed-form diagonal.
pub fn analytic_eigenvalues(model: &CompetitionModel, r: usize) -> Result<Vec<f64>> {
    let k = model.k();
    if r > k {
        return Err(Error::IndexOutOfRange { index: r, len: k });
    }
    let (b, d) = (model.b(), model.d());
    if r == 0 {
        return Ok(b.iter().zip(d).map(|(bi, di)| 1.0 - di + bi).collect());
    }
    let axis = r - 1;
    let y = axis_fixed_point(model, axis)?;
    let mu = d[axis] / b[axis];
    Ok((0..k)
        .map(|i| {
            if i == axis {
                1.0 + derivative_term_at(model, axis, y)
            } else {
                1.0 - d[i] + b[i] * mu
            }
        })
        .collect())
}

fn derivative_term_at(model: &CompetitionModel, axis: usize, y: f64) -> f64 {
    let slope = model.kernel().axis_derivative(model.b(), axis, axis, y);
    model.b()[axis] * y * slope
}

/// `b_r x_r ∂f/∂x_r` at the axis-`r` fixed point (1-based `r`; 0 returns 0).
pub fn derivative_term(model: &CompetitionModel, r: usize) -> Result<f64> {
    if r == 0 {
        return Ok(0.0);
    }
    let axis = r - 1;
    let y = axis_fixed_point(model, axis)?;
    Ok(derivative_term_at(model, axis, y))
}

/// Closed-form Jacobian of the map at any point of the kernel's current
/// branch: `∂T_i/∂x_j = δ_ij (1 - d_i + b_i f(x)) + b_i x_i ∂f/∂x_j(x)`.
pub fn analytic_jacobian(model: &CompetitionModel, x: &StateVector) -> Result<Vec<Vec<f64>>> {
    if x.len() != model.k() {
        return Err(Error::DimensionMismatch {
            what: "x",
            expected: model.k(),
            got: x.len(),
        });
    }
    let k = model.k();
    let (b, d) = (model.b(), model.d());
    let kernel = model.kernel();
    let f = kernel.value(b, x.as_slice());
    Ok((0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let coupling = b[i] * x[i] * kernel.gradient(b, x.as_slice(), j);
                    if i == j {
                        1.0 - d[i] + b[i] * f + coupling
                    } else {
                        coupling
                    }
                })
                .collect()
        })
        .collect())
}

pub(crate) fn numeric_jacobian_slice(
    model: &CompetitionModel,
    x: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    let k = model.k();
    let kernel = model.kernel();
    let center_branch = kernel.branch(model.b(), x);
    let mut jac = vec![0.0; k * k];
    let mut probe = x.to_vec();
    for j in 0..k {
        probe[j] = x[j] + h;
        if kernel.branch(model.b(), &probe) != center_branch {
            return Err(Error::KinkProximity { index: j });
        }
        let plus = model.step_slice(&probe);
        probe[j] = x[j] - h;
        if kernel.branch(model.b(), &probe) != center_branch {
            return Err(Error::KinkProximity { index: j });
        }
        let minus = model.step_slice(&probe);
        probe[j] = x[j];
        for i in 0..k {
            jac[i * k + j] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Central-difference Jacobian of the map at `x` (row `i`, column `j` holds
/// `∂T_i/∂x_j`). Errors with `KinkProximity` when a stencil point falls on a
/// different piecewise branch of the kernel than `x` itself.
pub fn numeric_jacobian(
    model: &CompetitionModel,
    x: &StateVector,
    h: f64,
) -> Result<Vec<Vec<f64>>> {
    if x.len() != model.k() {
        return Err(Error::DimensionMismatch {
            what: "x",
            expected: model.k(),
            got: x.len(),
        });
    }
    let flat = numeric_jacobian_slice(model, x.as_slice(), h)?;
    let k = model.k();
    Ok((0..k).map(|i| flat[i * k..(i + 1) * k].to_vec()).collect())
}

fn classify_from_spectrum(turnovers: &[f64], r: usize, eigenvalues: &[f64]) -> Classification {
    if r == 0 {
        return Classification::Repulsive;
    }
    if eigenvalues.iter().any(|l| l.abs() == 1.0) {
        return Classification::Marginal;
    }
    let axis = r - 1;
    if eigenvalues[axis].abs() > 1.0 {
        return Classification::Unstable;
    }
    // |λ_i| < 1 holds exactly for the strategies with smaller turnover, so
    // the point is stable on the face where the stronger strategies vanish;
    // it is stable outright only on the dominant axis.
    let dominant = turnovers.iter().all(|&l| l <= turnovers[axis]);
    if dominant {
        Classification::LocallyStable
    } else {
        Classification::SemiStable
    }
}

/// Stability class of fixed point `r` (0 = origin, else 1-based axis number).
pub fn classify(model: &CompetitionModel, r: usize) -> Result<Classification> {
    let l = turnover(model.strategies())?;
    let eig = analytic_eigenvalues(model, r)?;
    Ok(classify_from_spectrum(&l, r, &eig))
}

/// All `k + 1` fixed points with spectra and classifications, origin first,
/// then axis points in strategy order.
pub fn fixed_points(model: &CompetitionModel) -> Result<Vec<FixedPointReport>> {
    let l = turnover(model.strategies())?;
    let k = model.k();
    let mut reports = Vec::with_capacity(k + 1);
    for r in 0..=k {
        let point = if r == 0 {
            StateVector::zeros(k)
        } else {
            StateVector::axis(k, r - 1, axis_fixed_point(model, r - 1)?)?
        };
        let eigenvalues = analytic_eigenvalues(model, r)?;
        let classification = classify_from_spectrum(&l, r, &eigenvalues);
        reports.push(FixedPointReport {
            r,
            point,
            eigenvalues,
            classification,
            derivative_term: derivative_term(model, r)?,
        });
    }
    Ok(reports)
}
