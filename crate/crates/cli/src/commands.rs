//! Subcommand implementations. Each command validates everything first,
//! renders its artifacts in memory, and only then touches the filesystem, so
//! an invalid run leaves no partial output behind.

use std::path::{Path, PathBuf};

use serde::Serialize;
use turnover::continuous::{compare_discrete_continuous, integrate, monotone_ratio_check};
use turnover::equilibria::fixed_points;
use turnover::exclusion::{
    counterexample_sequences, exclusion_predicate, pair_coefficients, recurrence_residual,
    PairCoefficients,
};
use turnover::output::{continuous_csv, fmt_f64, sequences_csv, to_json_string, trajectory_csv};
use turnover::periodic::{
    asymptotic_feasibility, construct_period2, search_period2, solve_theta, OrbitPair,
    Period2Outcome, PeriodTwoOrbit,
};
use turnover::simulate::{extinction_diagnostics, pseudo_orbit_residual, trajectory};
use turnover::{Error, KernelFamily, StateVector, SuppressionKernel};

use crate::config::{ConfigDoc, Resolved};
use crate::Failure;

fn emit(path: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn json_line<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = to_json_string(value).map_err(|e| Failure::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub struct SimulateArgs {
    pub config: PathBuf,
    pub steps: Option<usize>,
    pub x0: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

#[derive(Serialize)]
struct SimulateOpts {
    steps: usize,
    x0: Vec<f64>,
    tol: f64,
    transient: usize,
}

#[derive(Serialize)]
struct PseudoOrbit {
    /// 1-based strategy number of the dominant strategy.
    r: usize,
    transient: usize,
    residual: f64,
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    config: Resolved<'a, SimulateOpts>,
    extinct: Vec<bool>,
    final_state: Vec<f64>,
    min_total: f64,
    /// Sup-distance of the dominant coordinate from the reduced map's orbit
    /// past the transient; absent when the turnover ordering is tied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pseudo_orbit: Option<PseudoOrbit>,
}

pub fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let doc = ConfigDoc::load(&args.config).map_err(Failure::Input)?;
    let model = doc.model()?;
    let x0 = doc.initial_state(&args.x0).map_err(Failure::Input)?;
    let steps = args.steps.or(doc.steps).unwrap_or(1000);
    let tol = args.tol.or(doc.tol).unwrap_or(1e-8);
    let transient = doc.transient.unwrap_or(steps / 2).min(steps);

    let traj = trajectory(&model, &x0, steps)?;
    let extinct = extinction_diagnostics(&traj, tol);
    let pseudo_orbit = exclusion_predicate(&model).ok().and_then(|report| {
        let r = report.dominant;
        pseudo_orbit_residual(&traj, r - 1, transient)
            .ok()
            .map(|residual| PseudoOrbit {
                r,
                transient,
                residual,
            })
    });
    let csv = trajectory_csv(&traj);
    let out = SimulateOutput {
        config: Resolved::new(
            &doc,
            SimulateOpts {
                steps,
                x0: x0.as_slice().to_vec(),
                tol,
                transient,
            },
        ),
        extinct,
        final_state: traj.final_state().as_slice().to_vec(),
        min_total: traj
            .states()
            .iter()
            .map(StateVector::total)
            .fold(f64::INFINITY, f64::min),
        pseudo_orbit,
    };
    let json = json_line(&out)?;

    emit(&args.csv, &csv)?;
    if args.json.is_some() || args.csv.is_some() {
        emit(&args.json, &json)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EmptyOpts {}

#[derive(Serialize)]
struct ExclusionOutput<'a> {
    config: Resolved<'a, EmptyOpts>,
    #[serde(flatten)]
    report: turnover::exclusion::ExclusionReport,
}

pub fn exclusion(config: &Path, out: &Option<PathBuf>) -> Result<(), Failure> {
    let doc = ConfigDoc::load(config).map_err(Failure::Input)?;
    let model = doc.model()?;
    let report = exclusion_predicate(&model)?;
    let json = json_line(&ExclusionOutput {
        config: Resolved::new(&doc, EmptyOpts {}),
        report,
    })?;
    emit(out, &json)
}

pub struct PeriodicArgs {
    pub config: PathBuf,
    pub search: bool,
    pub grid: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PeriodicOpts {
    grid: usize,
    seed: u64,
    search: bool,
}

#[derive(Serialize)]
struct OrbitOutput<'a> {
    config: Resolved<'a, PeriodicOpts>,
    #[serde(flatten)]
    orbit: &'a PeriodTwoOrbit,
    feasibility: &'a turnover::periodic::Feasibility,
    #[serde(skip_serializing_if = "Option::is_none")]
    search: Option<&'a [OrbitPair]>,
}

#[derive(Serialize)]
struct NoOrbitOutput<'a> {
    config: Resolved<'a, PeriodicOpts>,
    orbit: Option<()>,
    failed: &'static str,
    feasibility: &'a turnover::periodic::Feasibility,
    #[serde(skip_serializing_if = "Option::is_none")]
    search: Option<&'a [OrbitPair]>,
}

pub fn periodic(args: PeriodicArgs) -> Result<(), Failure> {
    let doc = ConfigDoc::load(&args.config).map_err(Failure::Input)?;
    let model = doc.model()?;
    let grid = args.grid.or(doc.grid).unwrap_or(30);
    let seed = args.seed.or(doc.seed).unwrap_or(0);

    let outcome = construct_period2(&model)?;
    let feasibility = asymptotic_feasibility(&model)?;
    let found = if args.search {
        Some(search_period2(&model, grid, seed)?)
    } else {
        None
    };
    let resolved = Resolved::new(
        &doc,
        PeriodicOpts {
            grid,
            seed,
            search: args.search,
        },
    );
    let json = match &outcome {
        Period2Outcome::Orbit(orbit) => json_line(&OrbitOutput {
            config: resolved,
            orbit,
            feasibility: &feasibility,
            search: found.as_deref(),
        })?,
        Period2Outcome::NoOrbit(reason) => json_line(&NoOrbitOutput {
            config: resolved,
            orbit: None,
            failed: reason.as_str(),
            feasibility: &feasibility,
            search: found.as_deref(),
        })?,
    };
    emit(&args.out, &json)
}

#[derive(Serialize)]
struct EquilibriaOutput<'a> {
    config: Resolved<'a, EmptyOpts>,
    fixed_points: Vec<turnover::equilibria::FixedPointReport>,
}

pub fn equilibria(config: &Path, out: &Option<PathBuf>) -> Result<(), Failure> {
    let doc = ConfigDoc::load(config).map_err(Failure::Input)?;
    let model = doc.model()?;
    let reports = fixed_points(&model)?;
    let json = json_line(&EquilibriaOutput {
        config: Resolved::new(&doc, EmptyOpts {}),
        fixed_points: reports,
    })?;
    emit(out, &json)
}

pub struct ContinuousArgs {
    pub config: PathBuf,
    pub x0: Option<Vec<f64>>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

#[derive(Serialize)]
struct ContinuousOpts {
    t_max: f64,
    dt: f64,
    x0: Vec<f64>,
}

#[derive(Serialize)]
struct SlopeCheck {
    i: usize,
    slope: f64,
    deviation: Option<f64>,
}

#[derive(Serialize)]
struct ContinuousOutput<'a> {
    config: Resolved<'a, ContinuousOpts>,
    final_state: Vec<f64>,
    slope_checks: Vec<SlopeCheck>,
}

pub fn continuous(args: ContinuousArgs) -> Result<(), Failure> {
    let doc = ConfigDoc::load(&args.config).map_err(Failure::Input)?;
    let model = doc.model()?;
    let x0 = doc.initial_state(&args.x0).map_err(Failure::Input)?;
    let t_max = args.t_max.or(doc.t_max).unwrap_or(50.0);
    let dt = args.dt.or(doc.dt).unwrap_or(0.01);

    let traj = integrate(&model, &x0, t_max, dt)?;
    let slope_checks = (1..model.k())
        .map(|i| SlopeCheck {
            i: i + 1,
            slope: model.b()[0] * model.d()[i] - model.b()[i] * model.d()[0],
            // A zero component makes the log-ratio undefined; report null.
            deviation: monotone_ratio_check(&traj, i).ok(),
        })
        .collect();
    let csv = continuous_csv(&traj);
    let json = json_line(&ContinuousOutput {
        config: Resolved::new(
            &doc,
            ContinuousOpts {
                t_max,
                dt,
                x0: x0.as_slice().to_vec(),
            },
        ),
        final_state: traj.final_state().as_slice().to_vec(),
        slope_checks,
    })?;

    emit(&args.csv, &csv)?;
    if args.json.is_some() || args.csv.is_some() {
        emit(&args.json, &json)?;
    }
    Ok(())
}

pub struct ConsistencyArgs {
    pub config: PathBuf,
    pub x0: Option<Vec<f64>>,
    pub h: Option<f64>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConsistencyOpts {
    h: f64,
    t_max: f64,
    dt: f64,
    tol: f64,
    x0: Vec<f64>,
}

#[derive(Serialize)]
struct ConsistencyOutput<'a> {
    config: Resolved<'a, ConsistencyOpts>,
    #[serde(flatten)]
    report: turnover::continuous::ConsistencyReport,
}

pub fn consistency(args: ConsistencyArgs) -> Result<(), Failure> {
    let doc = ConfigDoc::load(&args.config).map_err(Failure::Input)?;
    let x0 = doc.initial_state(&args.x0).map_err(Failure::Input)?;
    let h = args
        .h
        .or(doc.h)
        .ok_or_else(|| Failure::Input("no step: pass --h or set \"h\" in the config".into()))?;
    let t_max = args.t_max.or(doc.t_max).unwrap_or(200.0);
    let dt = args.dt.or(doc.dt).unwrap_or(0.01);
    let tol = args.tol.or(doc.tol).unwrap_or(1e-6);

    let report = compare_discrete_continuous(&doc.b, &doc.d, &doc.kernel, &x0, h, t_max, dt, tol)?;
    let json = json_line(&ConsistencyOutput {
        config: Resolved::new(
            &doc,
            ConsistencyOpts {
                h,
                t_max,
                dt,
                tol,
                x0: x0.as_slice().to_vec(),
            },
        ),
        report,
    })?;
    emit(&args.out, &json)
}

pub struct SeqlabArgs {
    pub config: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub n: Option<usize>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

#[derive(Serialize)]
struct SeqlabOpts {
    alpha: f64,
    beta: f64,
    c1: f64,
    c2: f64,
    n: usize,
}

#[derive(Serialize)]
#[serde(untagged)]
enum SeqlabConfig<'a> {
    Model(Resolved<'a, SeqlabOpts>),
    Raw(SeqlabOpts),
}

#[derive(Serialize)]
struct SeqlabOutput<'a> {
    config: SeqlabConfig<'a>,
    gamma: f64,
    theta: f64,
    residual: f64,
}

pub fn seqlab(args: SeqlabArgs) -> Result<(), Failure> {
    let doc = match &args.config {
        Some(path) => Some(ConfigDoc::load(path).map_err(Failure::Input)?),
        None => None,
    };
    // Coefficients come from the model's leading pair unless spelled out.
    let coeff: PairCoefficients = match (&doc, args.alpha, args.beta) {
        (_, Some(alpha), Some(beta)) => PairCoefficients::from_alpha_beta(alpha, beta)?,
        (Some(doc), None, None) => {
            let model = doc.model()?;
            if model.k() != 2 {
                return Err(Failure::Input(
                    "sequence construction needs a 2-strategy model or explicit --alpha/--beta"
                        .into(),
                ));
            }
            let report = exclusion_predicate(&model)?;
            let dom = report.dominant - 1;
            let other = 1 - dom;
            pair_coefficients(
                model.b()[dom],
                model.d()[dom],
                model.b()[other],
                model.d()[other],
            )?
        }
        _ => {
            return Err(Failure::Input(
                "pass both --alpha and --beta, or a --config with a 2-strategy model".into(),
            ))
        }
    };

    let (c1, c2) = (
        args.c1.or(doc.as_ref().and_then(|d| d.c1)).unwrap_or(1.0),
        args.c2.or(doc.as_ref().and_then(|d| d.c2)).unwrap_or(1.0),
    );
    let n = args.n.or(doc.as_ref().and_then(|d| d.n)).unwrap_or(16);

    let theta = solve_theta(coeff.alpha, coeff.gamma)?;
    let (u, v) = counterexample_sequences(&coeff, c1, c2, n)?;
    let residual = recurrence_residual(&u, &v, coeff.alpha, coeff.beta)?;

    let opts = SeqlabOpts {
        alpha: coeff.alpha,
        beta: coeff.beta,
        c1,
        c2,
        n,
    };
    let csv = sequences_csv(&u, &v);
    let json = json_line(&SeqlabOutput {
        config: match &doc {
            Some(doc) => SeqlabConfig::Model(Resolved::new(doc, opts)),
            None => SeqlabConfig::Raw(opts),
        },
        gamma: coeff.gamma,
        theta: theta.value,
        residual,
    })?;

    emit(&args.csv, &csv)?;
    if args.json.is_some() || args.csv.is_some() {
        emit(&args.json, &json)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAnalysis {
    Exclusion,
    Periodic,
    Equilibria,
}

pub struct SweepArgs {
    pub config: PathBuf,
    pub analysis: SweepAnalysis,
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub param2: Option<String>,
    pub from2: f64,
    pub to2: f64,
    pub points2: usize,
    pub out: Option<PathBuf>,
}

fn set_param(doc: &mut ConfigDoc, name: &str, value: f64) -> Result<(), String> {
    let vector_slot = |v: &mut Vec<f64>, idx: usize, what: &str| -> Result<(), String> {
        if idx == 0 || idx > v.len() {
            return Err(format!("{what}{idx} out of range for k = {}", v.len()));
        }
        v[idx - 1] = value;
        Ok(())
    };
    if let Some(idx) = name.strip_prefix('b').and_then(|s| s.parse::<usize>().ok()) {
        return vector_slot(&mut doc.b, idx, "b");
    }
    if let Some(idx) = name.strip_prefix('d').and_then(|s| s.parse::<usize>().ok()) {
        return vector_slot(&mut doc.d, idx, "d");
    }
    if let Some(idx) = name.strip_prefix('w').and_then(|s| s.parse::<usize>().ok()) {
        let mut weights = doc
            .kernel
            .weights()
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| vec![1.0; doc.k]);
        vector_slot(&mut weights, idx, "w")?;
        doc.kernel = SuppressionKernel::with_weights(doc.kernel.family().clone(), weights);
        return Ok(());
    }
    let family = match (name, doc.kernel.family()) {
        ("K", KernelFamily::Logistic { .. }) => KernelFamily::Logistic { k_cap: value },
        ("K", KernelFamily::NestSite { .. }) => KernelFamily::NestSite { k_cap: value },
        ("c", KernelFamily::BevertonHolt { .. }) => KernelFamily::BevertonHolt { c: value },
        ("c", KernelFamily::Ricker { .. }) => KernelFamily::Ricker { c: value },
        _ => {
            return Err(format!(
                "unknown sweep parameter {name:?} for the {} kernel (expected b<i>, d<i>, w<i>, K or c)",
                doc.kernel.family().name()
            ))
        }
    };
    doc.kernel = match doc.kernel.weights() {
        Some(w) => SuppressionKernel::with_weights(family, w.to_vec()),
        None => SuppressionKernel::new(family),
    };
    Ok(())
}

fn grid_values(from: f64, to: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![from];
    }
    (0..points)
        .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn sweep_point(doc: &ConfigDoc, analysis: SweepAnalysis) -> Result<(String, String), Error> {
    let model = doc.model()?;
    match analysis {
        SweepAnalysis::Exclusion => {
            let report = exclusion_predicate(&model)?;
            let pair = &report.pairs[0];
            let verdict = if pair.excluded {
                "excluded"
            } else {
                "possibly-coexisting"
            };
            let margin = 1.0 + pair.coefficients.beta - pair.coefficients.alpha;
            Ok((verdict.to_string(), fmt_f64(margin)))
        }
        SweepAnalysis::Periodic => match construct_period2(&model)? {
            Period2Outcome::Orbit(orbit) => Ok(("orbit".to_string(), fmt_f64(orbit.theta))),
            Period2Outcome::NoOrbit(reason) => Ok((reason.as_str().to_string(), String::new())),
        },
        SweepAnalysis::Equilibria => {
            let class = turnover::equilibria::classify(&model, 1)?;
            let term = turnover::equilibria::derivative_term(&model, 1)?;
            Ok((class.as_str().to_string(), fmt_f64(term)))
        }
    }
}

pub fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let doc = ConfigDoc::load(&args.config).map_err(Failure::Input)?;
    // The base model must be valid before any point runs.
    doc.model()?;

    let primary = grid_values(args.from, args.to, args.points);
    let secondary = match &args.param2 {
        Some(_) => grid_values(args.from2, args.to2, args.points2),
        None => vec![f64::NAN],
    };

    let mut csv = String::from("index,");
    csv.push_str(&args.param);
    if let Some(p2) = &args.param2 {
        csv.push(',');
        csv.push_str(p2);
    }
    csv.push_str(",verdict,detail,error\n");

    let mut index = 0usize;
    for v1 in &primary {
        for v2 in &secondary {
            let mut point_doc = doc.clone();
            let mut error = String::new();
            let mut verdict = String::new();
            let mut detail = String::new();
            let mut apply = || -> Result<(), String> {
                set_param(&mut point_doc, &args.param, *v1)?;
                if let Some(p2) = &args.param2 {
                    set_param(&mut point_doc, p2, *v2)?;
                }
                let (v, d) = sweep_point(&point_doc, args.analysis).map_err(|e| e.to_string())?;
                verdict = v;
                detail = d;
                Ok(())
            };
            if let Err(e) = apply() {
                error = e;
            }
            csv.push_str(&index.to_string());
            csv.push(',');
            csv.push_str(&fmt_f64(*v1));
            if args.param2.is_some() {
                csv.push(',');
                csv.push_str(&fmt_f64(*v2));
            }
            csv.push(',');
            csv.push_str(&csv_field(&verdict));
            csv.push(',');
            csv.push_str(&csv_field(&detail));
            csv.push(',');
            csv.push_str(&csv_field(&error));
            csv.push('\n');
            index += 1;
        }
    }
    emit(&args.out, &csv)
}
