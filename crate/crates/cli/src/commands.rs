//! Subcommand implementations.

use std::fs;
use std::io::{self, Write};

use capacity_core::boundary::{cir_asymptote, cir_tangent, generic_boundary};
use capacity_core::montecarlo::{
    dominance_test_around, equilibrium_check, identity_check, relative_offsets, revenue_horizon,
    volatility_margin, CostEstimate, DominanceReport, EquilibriumReport, McSettings, PolicySpec,
};
use capacity_core::policy::simulate as run_policy;
use capacity_core::sde::{derive_seed, sample_path};
use capacity_core::statics::{
    abm_boundary, abm_partials, check_abm_partial, check_gbm_elasticity, finite_diff_check,
    gbm_boundary_partial, Param, Point, Quantity,
};
use capacity_core::{Boundary, DemandModel, Scenario, TimeGrid, Trajectory};
use clap::Args;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::output::{Cell, Table};
use crate::{CliError, Common};

/// Loads the configuration (or preset), applies command-line overrides and
/// validates everything before any computation.
pub fn resolve(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::preset(&common.scenario)?,
    };
    if let Some(seed) = common.seed {
        cfg.mc.seed = seed;
    }
    if let Some(n) = common.paths {
        cfg.mc.n_paths = n;
    }
    if let Some(h) = common.horizon {
        cfg.mc.horizon = Some(h);
    }
    if let Some(q0) = common.q0 {
        cfg.scenario.q0 = q0;
    }
    if let Some(format) = common.format {
        cfg.outputs.format = format;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes to `--out`, or to standard output.
pub fn write(common: &Common, text: &str) -> Result<(), CliError> {
    let target = common.out.as_ref().map(|p| p.display().to_string());
    write_to(target.as_deref(), text)
}

fn write_to(path: Option<&str>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))
        }
        // A closed pipe (e.g. `| head`) is not an error.
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io(format!(
                "cannot write to standard output: {e}"
            ))),
            _ => Ok(()),
        },
    }
}

/// Writes to `--out`, else the configured output path, else standard output.
fn emit(cfg: &RunConfig, common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(_) => write(common, text),
        None => write_to(cfg.outputs.path.as_deref(), text),
    }
}

/// `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
pub fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |what: &str| CliError::Config(format!("invalid value list `{text}`: {what}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(&e.to_string()));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(bad("expected start:stop:count"));
        };
        let (a, b) = (num(a)?, num(b)?);
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| bad("count must be a positive integer"))?;
        return Ok(match n {
            0 => return Err(bad("count must be a positive integer")),
            1 => vec![a],
            _ => (0..n)
                .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                .collect(),
        });
    }
    let values = text.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(bad("empty"));
    }
    Ok(values)
}

pub fn parse_policy(text: &str) -> Result<PolicySpec, CliError> {
    let bad = || {
        CliError::Config(format!(
            "invalid policy `{text}` (expected optimal, shifted:X or constant:X)"
        ))
    };
    let value = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    match text.split_once(':') {
        None if text == "optimal" => Ok(PolicySpec::Optimal),
        Some(("shifted", x)) => Ok(PolicySpec::Shifted(value(x)?)),
        Some(("constant", x)) => Ok(PolicySpec::Constant(value(x)?)),
        _ => Err(bad()),
    }
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    /// Explicit demand levels (`a,b,c` or `start:stop:count`); overrides the range options.
    #[arg(long)]
    pub ds: Option<String>,
    /// Lowest demand level of the range.
    #[arg(long)]
    pub d_min: Option<f64>,
    /// Highest demand level (default: twice the long-run mean for CIR, twice the start otherwise).
    #[arg(long)]
    pub d_max: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Time-to-build values; one curve per (h, sigma) pair.
    #[arg(long)]
    pub hs: Option<String>,
    /// Volatility values; one curve per (h, sigma) pair.
    #[arg(long)]
    pub sigmas: Option<String>,
}

fn demand_levels(s: &Scenario, args: &BoundaryArgs) -> Result<Vec<f64>, CliError> {
    if let Some(ds) = &args.ds {
        return parse_values(ds);
    }
    if args.points < 2 {
        return Err(CliError::Config("--points must be at least 2".into()));
    }
    let d_max = args.d_max.unwrap_or(match s.model {
        DemandModel::Cir { delta, .. } => 2.0 * delta,
        _ => 2.0 * s.d,
    });
    let n = args.points;
    let d_min = args.d_min.unwrap_or(match s.model {
        DemandModel::Abm { .. } => 0.0,
        // Positive models: start one step above zero.
        _ => d_max / n as f64,
    });
    Ok((0..n)
        .map(|i| d_min + (d_max - d_min) * i as f64 / (n - 1) as f64)
        .collect())
}

pub fn boundary(cfg: &RunConfig, common: &Common, args: &BoundaryArgs) -> Result<(), CliError> {
    let s = &cfg.scenario;
    let ds = demand_levels(s, args)?;
    let hs = match &args.hs {
        Some(t) => parse_values(t)?,
        None => vec![s.h],
    };
    let sigmas = match &args.sigmas {
        Some(t) => parse_values(t)?,
        None => vec![s.model.sigma()],
    };
    let is_cir = s.model.cir_params().is_some();
    let mut columns = vec!["h", "sigma", "d", "c_hat", "beta0", "b_rho", "b_sigma"];
    if is_cir {
        columns.extend(["tangent", "asymptote", "diagonal"]);
    }
    let mut table = Table::new(&columns);
    for &h in &hs {
        for &sigma in &sigmas {
            let model = s.model.with_sigma(sigma);
            let b = Boundary::new(model, s.rho, h, s.q0)?;
            for &d in &ds {
                let parts = b.decompose(d)?;
                let mut row: Vec<Cell> = vec![
                    h.into(),
                    sigma.into(),
                    d.into(),
                    parts.boundary().into(),
                    parts.beta0.into(),
                    parts.discounting_bias.into(),
                    parts.precautionary_bias.into(),
                ];
                if let Some(p) = model.cir_params() {
                    row.push(cir_tangent(p, s.rho, h, s.q0, d).into());
                    row.push(cir_asymptote(p, s.rho, h, s.q0, d).into());
                    row.push(d.into());
                }
                table.push(row);
            }
        }
    }
    emit(cfg, common, &table.render(cfg.outputs.format))
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Policy: optimal, shifted:X or constant:X.
    #[arg(long, default_value = "optimal")]
    pub policy: String,
    /// Per-time mean and 5%/95% quantiles across paths instead of every path.
    #[arg(long)]
    pub summary: bool,
}

fn simulation_grid(cfg: &RunConfig) -> Result<TimeGrid, CliError> {
    match cfg.mc.horizon {
        Some(t) => Ok(TimeGrid::covering(cfg.grid.dt, t)?),
        None => Ok(cfg.grid),
    }
}

fn trajectories(
    cfg: &RunConfig,
    policy: &PolicySpec,
    n_paths: usize,
) -> Result<Vec<Trajectory>, CliError> {
    let s = &cfg.scenario;
    let grid = simulation_grid(cfg)?;
    let boundary = s.boundary()?;
    let rule = policy.bind(&boundary);
    (0..n_paths)
        .map(|i| {
            let path = sample_path(&s.model, s.d, grid, derive_seed(cfg.mc.seed, i as u64))?;
            Ok(run_policy(s, &rule, &path)?)
        })
        .collect()
}

/// Linear-interpolated sample quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn simulate(cfg: &RunConfig, common: &Common, args: &SimulateArgs) -> Result<(), CliError> {
    let policy = parse_policy(&args.policy)?;
    let n_paths = common.paths.unwrap_or(1);
    if n_paths == 0 {
        return Err(CliError::Config("--paths must be positive".into()));
    }
    let runs = trajectories(cfg, &policy, n_paths)?;
    let table = if args.summary {
        let mut table = Table::new(&[
            "t", "D_mean", "D_q05", "D_q95", "C_mean", "C_q05", "C_q95", "K_mean", "K_q05", "K_q95",
        ]);
        let grid = runs[0].grid;
        for i in 0..grid.len() {
            let mut row: Vec<Cell> = vec![grid.time(i).into()];
            for series in [
                |t: &Trajectory, i: usize| t.demand[i],
                |t: &Trajectory, i: usize| t.committed[i],
                |t: &Trajectory, i: usize| t.installed[i],
            ] {
                let mut v: Vec<f64> = runs.iter().map(|t| series(t, i)).collect();
                v.sort_by(f64::total_cmp);
                let mean = v.iter().sum::<f64>() / v.len() as f64;
                row.extend([
                    mean.into(),
                    quantile(&v, 0.05).into(),
                    quantile(&v, 0.95).into(),
                ]);
            }
            table.push(row);
        }
        table
    } else {
        let multi = n_paths > 1;
        let mut columns = vec!["t", "D", "C", "K", "dI", "p"];
        if multi {
            columns.insert(0, "path");
        }
        let mut table = Table::new(&columns);
        for (p, traj) in runs.iter().enumerate() {
            for i in 0..traj.len() {
                let mut row: Vec<Cell> = Vec::with_capacity(columns.len());
                if multi {
                    row.push(Cell::Int(p as u64));
                }
                row.extend([
                    traj.grid.time(i).into(),
                    traj.demand[i].into(),
                    traj.committed[i].into(),
                    traj.installed[i].into(),
                    traj.investment[i].into(),
                    traj.price[i].into(),
                ]);
                table.push(row);
            }
        }
        table
    };
    emit(cfg, common, &table.render(cfg.outputs.format))
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Policy: optimal, shifted:X or constant:X.
    #[arg(long, default_value = "optimal")]
    pub policy: String,
    /// Largest accepted tail bound, as a fraction of the estimate.
    #[arg(long, default_value_t = 0.01)]
    pub max_tail: f64,
}

fn estimate_json(e: &CostEstimate, max_tail: f64) -> Value {
    json!({
        "estimate": e.mean,
        "se": e.std_error,
        "n_paths": e.n_paths,
        "horizon": e.horizon,
        "tail_bound": e.tail_bound,
        "verdict": verdict(e.check_truncation(max_tail).is_ok()),
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

pub fn cost(cfg: &RunConfig, common: &Common, args: &CostArgs) -> Result<(), CliError> {
    let policy = parse_policy(&args.policy)?;
    let settings = cfg.mc_settings();
    let report = identity_check(&cfg.scenario, &policy, &settings)?;
    let named = [
        ("F", report.f),
        ("G+J", report.g_plus_j),
        ("G", report.g),
        ("J", report.j),
    ];
    let text = match cfg.outputs.format {
        Format::Json => {
            let estimates: serde_json::Map<String, Value> = named
                .iter()
                .map(|(name, e)| (name.to_string(), estimate_json(e, args.max_tail)))
                .collect();
            pretty(&json!({
                "policy": args.policy,
                "estimates": estimates,
                "identity": {
                    "difference": report.difference,
                    "tolerance": report.tolerance,
                    "verdict": verdict(report.pass),
                },
            }))
        }
        Format::Csv => {
            let mut table = Table::new(&[
                "functional",
                "estimate",
                "se",
                "n_paths",
                "horizon",
                "tail_bound",
                "verdict",
            ]);
            for (name, e) in &named {
                table.push(vec![
                    (*name).into(),
                    e.mean.into(),
                    e.std_error.into(),
                    Cell::Int(e.n_paths as u64),
                    e.horizon.into(),
                    e.tail_bound.into(),
                    verdict(e.check_truncation(args.max_tail).is_ok()).into(),
                ]);
            }
            table.render(Format::Csv)
        }
    };
    emit(cfg, common, &text)?;
    eprintln!(
        "identity F = G + J: difference {:.4e}, tolerance {:.4e}: {}",
        report.difference,
        report.tolerance,
        verdict(report.pass)
    );
    report.f.check_truncation(args.max_tail)?;
    report.g_plus_j.check_truncation(args.max_tail)?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct StaticsArgs {
    /// Relative finite-difference step.
    #[arg(long, default_value_t = 1e-5)]
    pub rel_step: f64,
    /// Demand level for partial derivatives of the boundary (default: the start).
    #[arg(long)]
    pub d: Option<f64>,
}

/// One row of the statics battery.
struct StaticsRow {
    quantity: &'static str,
    parameter: &'static str,
    kind: &'static str,
    value: f64,
    finite_difference: f64,
    fd_pass: bool,
    /// `"+"`, `"-"`, `"0"`, or `None` when the sign is not pinned down.
    expected: Option<&'static str>,
}

impl StaticsRow {
    fn sign_pass(&self) -> Option<bool> {
        self.expected.map(|e| match e {
            "+" => self.value > 0.0,
            "-" => self.value < 0.0,
            _ => self.value == 0.0,
        })
    }

    fn pass(&self) -> bool {
        self.fd_pass && self.sign_pass().unwrap_or(true)
    }
}

fn sign_of(x: f64) -> &'static str {
    if x > 0.0 {
        "+"
    } else if x < 0.0 {
        "-"
    } else {
        "0"
    }
}

fn statics_rows(s: &Scenario, d: f64, rel_step: f64) -> Result<Vec<StaticsRow>, CliError> {
    let mut rows = Vec::new();
    match s.model {
        DemandModel::Gbm { mu, sigma } => {
            let p = Point {
                mu,
                sigma,
                rho: s.rho,
                h: s.h,
                q0: s.q0,
            };
            let mu_sign = sign_of(mu);
            let elastic = [
                (Quantity::A, Param::H, Some(mu_sign)),
                (Quantity::A, Param::Sigma, Some("-")),
                (Quantity::A, Param::Mu, Some(mu_sign)),
                (Quantity::A, Param::Rho, Some("+")),
                (Quantity::BSigma, Param::H, Some(mu_sign)),
                (Quantity::BSigma, Param::Sigma, Some("+")),
                (Quantity::BSigma, Param::Mu, None),
                (Quantity::BSigma, Param::Rho, Some("-")),
            ];
            for (q, wrt, expected) in elastic {
                let r = check_gbm_elasticity(q, wrt, &p, rel_step)?;
                rows.push(StaticsRow {
                    quantity: q.name(),
                    parameter: wrt.name(),
                    kind: "elasticity",
                    value: r.analytic,
                    finite_difference: r.finite_difference,
                    fd_pass: r.pass,
                    expected,
                });
            }
            for wrt in Param::ALL {
                let analytic = gbm_boundary_partial(wrt, &p, d)?;
                let level = |v: f64| {
                    let q = p.with(wrt, v);
                    let model = DemandModel::Gbm {
                        mu: q.mu,
                        sigma: q.sigma,
                    };
                    Boundary::new(model, q.rho, q.h, q.q0)?.eval(d)
                };
                let r = finite_diff_check(level, p.get(wrt), analytic, rel_step)?;
                rows.push(StaticsRow {
                    quantity: Quantity::CHat.name(),
                    parameter: wrt.name(),
                    kind: "partial",
                    value: analytic,
                    finite_difference: r.finite_difference,
                    fd_pass: r.pass,
                    expected: (wrt == Param::Q0).then_some("-"),
                });
            }
        }
        DemandModel::Abm { mu, sigma } => {
            let p = Point {
                mu,
                sigma,
                rho: s.rho,
                h: s.h,
                q0: s.q0,
            };
            for wrt in Param::ALL {
                let r = check_abm_partial(wrt, &p, d, rel_step)?;
                let expected = match wrt {
                    Param::Sigma | Param::Q0 => Some("-"),
                    Param::Mu => Some("+"),
                    Param::H | Param::Rho => None,
                };
                rows.push(StaticsRow {
                    quantity: Quantity::CHat.name(),
                    parameter: wrt.name(),
                    kind: "partial",
                    value: r.analytic,
                    finite_difference: r.finite_difference,
                    fd_pass: r.pass,
                    expected,
                });
            }
            let cross = abm_partials(mu, sigma, s.rho, s.h, s.q0)?.d_h_sigma;
            let (dh, ds) = (rel_step * s.h, rel_step * sigma);
            let at = |h: f64, sg: f64| abm_boundary(&p.with(Param::H, h).with(Param::Sigma, sg), d);
            let fd = (at(s.h + dh, sigma + ds)? - at(s.h + dh, sigma - ds)? - at(s.h - dh, sigma + ds)?
                + at(s.h - dh, sigma - ds)?)
                / (4.0 * dh * ds);
            // The mixed difference cancels to rounding noise; scale the test accordingly.
            let noise = 1e-12 * at(s.h, sigma)?.abs().max(1.0) / (dh * ds);
            rows.push(StaticsRow {
                quantity: Quantity::CHat.name(),
                parameter: "h_sigma",
                kind: "cross_partial",
                value: cross,
                finite_difference: fd,
                fd_pass: (fd - cross).abs() <= noise.max(1e-6),
                expected: Some("0"),
            });
        }
        DemandModel::Cir { .. } => {
            return Err(CliError::Config(
                "no analytic comparative statics for the CIR model; use `boundary` for its tangent and asymptote"
                    .into(),
            ))
        }
    }
    Ok(rows)
}

pub fn statics(cfg: &RunConfig, common: &Common, args: &StaticsArgs) -> Result<(), CliError> {
    let s = &cfg.scenario;
    let rows = statics_rows(s, args.d.unwrap_or(s.d), args.rel_step)?;
    let mut table = Table::new(&[
        "quantity",
        "parameter",
        "kind",
        "value",
        "finite_difference",
        "fd_check",
        "expected_sign",
        "sign_check",
    ]);
    for r in &rows {
        table.push(vec![
            r.quantity.into(),
            r.parameter.into(),
            r.kind.into(),
            r.value.into(),
            r.finite_difference.into(),
            verdict(r.fd_pass).into(),
            r.expected.unwrap_or("n/a").into(),
            r.sign_pass().map_or("n/a", verdict).into(),
        ]);
    }
    emit(cfg, common, &table.render(cfg.outputs.format))?;
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass())
        .map(|r| format!("{}/{}", r.quantity, r.parameter))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "statics checks failed: {}",
            failed.join(", ")
        )))
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Negative control: test dominance around a boundary with half the slope.
    #[arg(long)]
    pub corrupt_slope: bool,
}

fn check(name: &str, pass: bool, detail: Value) -> Value {
    json!({ "name": name, "verdict": verdict(pass), "detail": detail })
}

fn oracle_check(s: &Scenario) -> Result<Value, CliError> {
    let b = s.boundary()?;
    let mut worst = 0.0_f64;
    let mut points = Vec::new();
    for d in [0.5 * s.d, s.d, 2.0 * s.d] {
        let closed = b.eval(d)?;
        let generic = generic_boundary(&s.model, s.rho, s.h, s.q0, d)?;
        let scale = closed.abs().max(d.abs()).max(1.0);
        worst = worst.max((closed - generic).abs() / scale);
        points.push(json!({ "d": d, "closed_form": closed, "generic": generic }));
    }
    Ok(check(
        "boundary_oracle",
        worst <= 1e-6,
        json!({ "max_scaled_error": worst, "points": points }),
    ))
}

fn dominance_json(report: &DominanceReport) -> Value {
    let rows: Vec<Value> = report
        .results
        .iter()
        .map(|r| {
            json!({
                "offset": r.offset,
                "cost": r.cost.mean,
                "difference": r.difference,
                "paired_se": r.paired_se,
                "verdict": verdict(r.pass),
            })
        })
        .collect();
    Value::Array(rows)
}

fn equilibrium_json(r: &EquilibriumReport) -> Value {
    json!({
        "q0": r.q0,
        "start_gap": r.start_gap,
        "revenue": r.revenue.mean,
        "se": r.revenue.std_error,
        "revenue_realized_from_h": r.revenue_from_h.mean,
        "revenue_realized_from_zero": r.revenue_from_zero.mean,
        "verdict": verdict(r.pass),
    })
}

pub fn verify(cfg: &RunConfig, common: &Common, args: &VerifyArgs) -> Result<(), CliError> {
    let s = &cfg.scenario;
    let settings = cfg.mc_settings();
    let boundary = s.boundary()?;
    let mut checks = vec![oracle_check(s)?];

    let identity = identity_check(s, &PolicySpec::Optimal, &settings)?;
    checks.push(check(
        "cost_identity",
        identity.pass,
        json!({
            "F": identity.f.mean,
            "G_plus_J": identity.g_plus_j.mean,
            "difference": identity.difference,
            "tolerance": identity.tolerance,
        }),
    ));

    let offsets = match s.model {
        DemandModel::Abm { .. } => vec![-300.0, -100.0, 100.0, 300.0],
        _ => relative_offsets(s, &[-0.15, -0.05, 0.05, 0.15])?,
    };
    let base = if args.corrupt_slope {
        let b_rho = boundary.discounting_bias();
        let b = boundary;
        PolicySpec::Custom(std::sync::Arc::new(move |d| {
            0.5 * (b.eval(d).unwrap_or(f64::NAN) + b_rho) - b_rho
        }))
    } else {
        PolicySpec::Optimal
    };
    let dominance = dominance_test_around(s, &base, &offsets, &settings)?;
    checks.push(check(
        "dominance",
        dominance.pass,
        dominance_json(&dominance),
    ));

    let eq_settings = McSettings {
        horizon: revenue_horizon(&s.model, s.rho),
        ..settings
    };
    let on = Scenario {
        k: boundary.eval(s.d)? - s.pipeline.total(),
        ..s.clone()
    };
    let inside = Scenario {
        k: on.k + volatility_margin(s, 10.0),
        ..s.clone()
    };
    let eq_on = equilibrium_check(&on, &eq_settings)?;
    let eq_in = equilibrium_check(&inside, &eq_settings)?;
    checks.push(check(
        "equilibrium",
        eq_on.pass && eq_in.pass,
        json!({ "on_boundary": equilibrium_json(&eq_on), "inside": equilibrium_json(&eq_in) }),
    ));

    match s.model {
        DemandModel::Cir { .. } => checks.push(json!({
            "name": "statics",
            "verdict": "SKIPPED",
            "detail": "no analytic comparative statics for the CIR model",
        })),
        _ => {
            let rows = statics_rows(s, s.d, 1e-5)?;
            let failed: Vec<String> = rows
                .iter()
                .filter(|r| !r.pass())
                .map(|r| format!("{}/{}", r.quantity, r.parameter))
                .collect();
            checks.push(check(
                "statics",
                failed.is_empty(),
                json!({ "checked": rows.len(), "failed": failed }),
            ));
        }
    }

    let failed: Vec<String> = checks
        .iter()
        .filter(|c| c["verdict"] == "FAIL")
        .map(|c| c["name"].as_str().unwrap_or("?").to_string())
        .collect();
    let report = json!({
        "model": s.model.name(),
        "n_paths": settings.n_paths,
        "seed": settings.seed,
        "checks": checks,
        "verdict": verdict(failed.is_empty()),
    });
    emit(cfg, common, &pretty(&report))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
