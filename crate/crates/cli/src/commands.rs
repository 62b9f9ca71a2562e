//! One handler per command. Each returns a status, a JSON result and a CSV table.

use std::path::Path;

use qcompact_core::function_space::mu_uec_family;
use qcompact_core::mnc::EXACT_KCENTER_LIMIT;
use qcompact_core::{
    aa_net, chebyshev_center, check_alpha, cover_profile, cover_profile_ambient, exact_kcenter, jung_check,
    modulus, mu_ut, prokhorov_distance, sample_walks, tv_distance, verify_qaa, verify_qprokh, verify_qsaa,
    Error, IndexSet, PLPath, QProkhOptions, QsaaOptions,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, Params, RunConfig};
use crate::error::CliError;
use crate::input::Inputs;
use crate::report::{Cell, Status, Table};

pub const DEFAULT_K_MAX: usize = 4;

/// Relative step below `alpha_star` at which a violating set is reported.
const BELOW_STEP: f64 = 1e-9;

pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub table: Table,
}

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}

fn need<T: Copy>(name: &str, v: Option<T>) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("missing parameter `{name}`")))
}

fn need_grid<'a>(name: &str, v: &'a Option<Vec<f64>>) -> Result<&'a [f64], CliError> {
    v.as_deref()
        .ok_or_else(|| CliError::Input(format!("missing parameter `{name}`")))
}

/// Errors that mean a hard invariant failed rather than bad input.
fn is_verification_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::JungViolation { .. } | Error::Certificate(_) | Error::FlowInconsistency { .. }
    )
}

fn max_norm(paths: &[PLPath]) -> f64 {
    paths.iter().map(PLPath::norm).fold(0.0, f64::max)
}

/// Runs the command and fills in parameter defaults in `params`.
pub fn execute(config: &RunConfig, inputs: &mut Inputs, params: &mut Params) -> Result<Outcome, CliError> {
    match dispatch(config, inputs, params) {
        Ok(out) => Ok(out),
        Err(Failure::Core(e)) if is_verification_failure(&e) => {
            let mut table = Table::new(&["error"]);
            table.push(vec![Cell::Text(format!("\"{}\"", e.to_string().replace('"', "'")))]);
            Ok(Outcome {
                status: Status::Fail,
                result: json!({ "error": e.to_string() }),
                table,
            })
        }
        Err(Failure::Core(e)) => Err(e.into()),
        Err(Failure::Cli(e)) => Err(e),
    }
}

enum Failure {
    Core(Error),
    Cli(CliError),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        Failure::Cli(e)
    }
}

fn dispatch(config: &RunConfig, inputs: &mut Inputs, params: &mut Params) -> Result<Outcome, Failure> {
    let files: Vec<&Path> = config.inputs.iter().map(|p| p.as_path()).collect();
    match config.command {
        Command::ProkhorovDist => prokhorov_dist(inputs, &files, params),
        Command::TvDist => {
            let p = inputs.measure(files[0])?;
            let q = inputs.measure(files[1])?;
            let tv = tv_distance(&p, &q)?;
            let mut table = Table::new(&["tv"]);
            table.push(vec![tv.into()]);
            ok(json!({ "tv": tv }), table)
        }
        Command::MuUt => {
            let family = inputs.family(files[0])?;
            let grid = need_grid("eps_grid", &params.eps_grid)?.to_vec();
            let k_max = *params.k_max.get_or_insert(DEFAULT_K_MAX);
            let est = mu_ut(&family, &grid, k_max)?;
            let mut table = Table::new(&["eps", "upper", "lower"]);
            for e in &est.entries {
                table.push(vec![e.eps.into(), e.upper.into(), opt(e.lower)]);
            }
            ok(value(&est), table)
        }
        Command::CoverProfile => {
            let space = inputs.space(files[0])?;
            let k_max = *params.k_max.get_or_insert(DEFAULT_K_MAX);
            let all = IndexSet::all(space.len());
            let profile = if params.ambient {
                cover_profile_ambient(&space, &all, k_max)?
            } else {
                cover_profile(&space, &all, k_max)?
            };
            let exact = if space.len() <= EXACT_KCENTER_LIMIT {
                (1..=k_max)
                    .map(|k| exact_kcenter(&space, &all, k))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                Vec::new()
            };
            let mut table = Table::new(&["k", "r_k", "p_k", "exact", "ambient"]);
            for (i, (k, r, p)) in profile.rows().into_iter().enumerate() {
                let ex = k.checked_sub(1).and_then(|j| exact.get(j)).map(|e| e.radius);
                let amb = profile.ambient.as_ref().map(|a| a[i].radius);
                table.push(vec![k.into(), r.into(), p.into(), opt(ex), opt(amb)]);
            }
            ok(json!({ "profile": value(&profile), "exact": value(&exact) }), table)
        }
        Command::Modulus => {
            let paths = inputs.paths(files[0])?;
            let mut deltas: Vec<f64> = params.delta_grid.clone().unwrap_or_default();
            deltas.extend(params.delta);
            if deltas.is_empty() {
                return Err(CliError::Input("missing parameter `delta` or `delta_grid`".into()).into());
            }
            deltas.sort_by(f64::total_cmp);
            deltas.dedup();
            let mut rows = Vec::new();
            let mut table = Table::new(&["delta", "path", "modulus"]);
            for &d in &deltas {
                let per_path = paths.iter().map(|x| modulus(x, d)).collect::<Result<Vec<_>, _>>()?;
                let family = per_path.iter().copied().fold(0.0, f64::max);
                for (i, w) in per_path.iter().enumerate() {
                    table.push(vec![d.into(), i.into(), (*w).into()]);
                }
                table.push(vec![d.into(), "family".into(), family.into()]);
                rows.push(json!({ "delta": d, "per_path": per_path, "family": family }));
            }
            ok(json!({ "rows": rows }), table)
        }
        Command::Cheby => {
            let points = inputs.points(files[0])?;
            let ball = chebyshev_center(&points)?;
            let mut table = Table::new(&["radius", "support_size", "hull_residual"]);
            table.push(vec![ball.radius.into(), ball.support.len().into(), ball.hull_residual.into()]);
            ok(value(&ball), table)
        }
        Command::JungCheck => {
            let points = inputs.points(files[0])?;
            let report = jung_check(&points)?;
            let mut table = Table::new(&["dim", "diameter", "radius", "lower", "upper", "ok"]);
            table.push(vec![
                report.dim.into(),
                report.diameter.into(),
                report.radius.into(),
                report.lower.into(),
                report.upper.into(),
                report.ok.into(),
            ]);
            ok(value(&report), table)
        }
        Command::AaNet => {
            let paths = inputs.paths(files[0])?;
            let delta = need("delta", params.delta)?;
            let eps = need("eps", params.eps)?;
            let alpha = match params.alpha {
                Some(a) => a,
                None => *params.alpha.insert(mu_uec_family(&paths, delta)?),
            };
            let m_bound = *params.m_bound.get_or_insert(max_norm(&paths));
            let net = aa_net(&paths, delta, alpha, m_bound, eps)?;
            let mut table = Table::new(&["sample", "member", "achieved", "bound"]);
            for s in &net.per_sample {
                table.push(vec![s.sample.into(), s.member.into(), s.achieved.into(), s.bound.into()]);
            }
            let mut result = value(&net);
            if params.list_grid {
                result["lattice_points"] = value(&net.list_grid()?);
            }
            ok(result, table)
        }
        Command::VerifyQprokh => {
            let family = inputs.family(files[0])?;
            let opts = QProkhOptions {
                lambda_grid: need_grid("lambda_grid", &params.lambda_grid)?.to_vec(),
                eps: need("eps", params.eps)?,
                eps_grid: params.eps_grid.clone().unwrap_or_default(),
                k_max: *params.k_max.get_or_insert(DEFAULT_K_MAX),
            };
            let report = verify_qprokh(&family, &opts)?;
            let mut table = Table::new(&["lambda", "cell_radius", "cells", "t_gamma_bound", "radius", "bound", "holds"]);
            for r in &report.rows {
                table.push(vec![
                    r.lambda.into(),
                    r.cell_radius.into(),
                    r.cells.len().into(),
                    r.net.t_gamma_bound.into(),
                    r.cover.radius.into(),
                    r.cover.bound.into(),
                    r.cover.holds.into(),
                ]);
            }
            verdict(report.verdict.into(), value(&report), table)
        }
        Command::VerifyQaa => {
            let paths = inputs.paths(files[0])?;
            let grid = need_grid("delta_grid", &params.delta_grid)?.to_vec();
            let eps = need("eps", params.eps)?;
            let m_bound = *params.m_bound.get_or_insert(max_norm(&paths));
            let report = verify_qaa(&paths, &grid, m_bound, eps)?;
            let mut table = Table::new(&["delta", "alpha", "covering_radius", "bound", "upper_ok"]);
            for r in &report.rows {
                table.push(vec![
                    r.delta.into(),
                    r.alpha.into(),
                    r.covering_radius.into(),
                    r.bound.into(),
                    r.upper_ok.into(),
                ]);
            }
            verdict(report.verdict.into(), value(&report), table)
        }
        Command::VerifyQsaa => {
            let mut ensembles = Vec::new();
            for f in &files {
                ensembles.extend(inputs.ensembles(f)?);
            }
            let opts = QsaaOptions {
                lambda_grid: need_grid("lambda_grid", &params.lambda_grid)?.to_vec(),
                eps_grid: need_grid("eps_grid", &params.eps_grid)?.to_vec(),
                delta_grid: need_grid("delta_grid", &params.delta_grid)?.to_vec(),
                m_grid: need_grid("m_grid", &params.m_grid)?.to_vec(),
                eps: need("eps", params.eps)?,
            };
            let report = verify_qsaa(&ensembles, &opts)?;
            let mut table = Table::new(&["lambda", "a", "b", "covering", "hard_bound", "upper_bound", "hard_ok", "upper_ok"]);
            for r in &report.rows {
                table.push(vec![
                    r.lambda.into(),
                    report.a.into(),
                    report.b.into(),
                    r.covering.into(),
                    r.hard_bound.into(),
                    r.upper_bound.into(),
                    r.hard_ok.into(),
                    r.upper_ok.into(),
                ]);
            }
            verdict(report.verdict.into(), value(&report), table)
        }
        Command::GenWalks => {
            let n_steps = need("n_steps", params.n_steps)?;
            let n_paths = need("n_paths", params.n_paths)?;
            let seed = need("seed", params.seed)?;
            let scale = *params.scale.get_or_insert(1.0);
            let ensemble = sample_walks(n_steps, n_paths, scale, seed)?;
            let mut table = Table::new(&["path", "knot", "t", "value"]);
            for (i, x) in ensemble.paths().iter().enumerate() {
                for (j, (t, v)) in x.knots().iter().zip(x.values()).enumerate() {
                    table.push(vec![i.into(), j.into(), (*t).into(), v[0].into()]);
                }
            }
            ok(value(&ensemble), table)
        }
    }
}

fn prokhorov_dist(inputs: &mut Inputs, files: &[&Path], params: &mut Params) -> Result<Outcome, Failure> {
    let p = inputs.measure(files[0])?;
    let q = inputs.measure(files[1])?;
    let lambda = need("lambda", params.lambda)?;
    let dist = prokhorov_distance(&p, &q, lambda)?;
    let alpha_star = dist.alpha;
    let below = if alpha_star > 0.0 {
        Some(check_alpha(&p, &q, lambda, alpha_star * (1.0 - BELOW_STEP))?)
    } else {
        None
    };
    let check = params.alpha.map(|a| check_alpha(&p, &q, lambda, a)).transpose()?;
    let mut table = Table::new(&["lambda", "alpha_star", "alpha", "feasible"]);
    table.push(vec![
        lambda.into(),
        alpha_star.into(),
        opt(params.alpha),
        check.as_ref().map_or(Cell::Text(String::new()), |c| c.is_feasible().into()),
    ]);
    let mut result = json!({
        "lambda": lambda,
        "alpha_star": alpha_star,
        "coupling": value(&dist.certificate),
    });
    if let Some(b) = below {
        result["below"] = value(&b);
    }
    if let Some(c) = check {
        result["check"] = value(&c);
    }
    ok(result, table)
}

fn opt(v: Option<f64>) -> Cell {
    v.map_or(Cell::Text(String::new()), Cell::Float)
}

fn ok(result: Value, table: Table) -> Result<Outcome, Failure> {
    verdict(Status::Ok, result, table)
}

fn verdict(status: Status, result: Value, table: Table) -> Result<Outcome, Failure> {
    Ok(Outcome { status, result, table })
}
