use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use growthlab::params::restricted_sigma_denominator;
use growthlab::verify::{self, log_slopes, FamilyComparison, ResidualOptions, VerifyOptions};
use growthlab::{
    integrate_grid, restricted_sigma, steady_state, validate_params, Family, Provenance, StateSource, Trajectory,
    ZPath,
};
use serde::Serialize;
use serde_json::json;

use crate::config::{Format, ModelArgs, RunConfig};
use crate::error::CliError;
use crate::output::{emit, num, to_json, trajectory_csv};
use crate::sweep::{self, SweepContext, SweepOutput, SweepSpec};

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Admissibility of each solution family (JSON or text).
    Validate(ModelArgs),
    /// z*, u*, g*, η and the restricted σ.
    SteadyState(ModelArgs),
    /// z(t), F(t) and G(t) on the time grid (CSV).
    Zpath(ModelArgs),
    /// Closed-form trajectory of one family (CSV).
    Simulate(ModelArgs),
    /// Numerical solution from the family's pinned initial state (CSV).
    Integrate(ModelArgs),
    /// Full verification report of one family (JSON); exit 2 on failure.
    Verify(VerifyArgs),
    /// Gaps between the two z ≠ z* families.
    Compare(CompareArgs),
    /// Derived quantities over a parameter grid.
    Sweep(SweepArgs),
    /// Long-format series for plotting.
    Plotdata(PlotArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Relative level the last transversality product must fall below.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Transversality checkpoints.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<f64>>,
    /// Skip the comparison with the numerical solution.
    #[arg(long)]
    pub no_oracle: bool,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Also write the per-time gaps as CSV to this file.
    #[arg(long, value_name = "PATH")]
    pub gaps: Option<PathBuf>,
    /// Time at which the u and h gaps are reported.
    #[arg(long, default_value_t = 1.0)]
    pub probe: f64,
    /// Terminal time; defaults to 200/g*.
    #[arg(long)]
    pub terminal: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// NAME=MIN:MAX:COUNT or NAME=V1,V2,... (repeatable).
    #[arg(long = "vary", value_name = "NAME=VALUES")]
    pub vary: Vec<String>,
    #[arg(long, value_delimiter = ',', value_enum)]
    pub outputs: Option<Vec<SweepOutput>>,
    /// Largest admissible number of grid points.
    #[arg(long)]
    pub max_points: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Families to include; defaults to the one selected by --family.
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<Family>>,
    /// Variables to emit; growth rates are named growth_<variable>.
    #[arg(long, value_delimiter = ',')]
    pub variables: Option<Vec<String>>,
    /// Add a numerically integrated series for each family.
    #[arg(long)]
    pub numeric: bool,
}

pub fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Validate(a) => validate(&RunConfig::resolve(&a)?),
        Command::SteadyState(a) => steady(&RunConfig::resolve(&a)?),
        Command::Zpath(a) => zpath(&RunConfig::resolve(&a)?),
        Command::Simulate(a) => simulate(&RunConfig::resolve(&a)?),
        Command::Integrate(a) => integrate(&RunConfig::resolve(&a)?),
        Command::Verify(a) => verify_cmd(&a),
        Command::Compare(a) => compare(&a),
        Command::Sweep(a) => sweep_cmd(&a),
        Command::Plotdata(a) => plotdata(&a),
    }
}

fn model_err<E: Into<growthlab::Error>>(e: E) -> CliError {
    CliError::Model(e.into())
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let format = cfg.format_or(Format::Json, &[Format::Json, Format::Text])?;
    let adm = validate_params(&cfg.params).map_err(model_err)?;
    let text = match format {
        Format::Text => {
            let mut out = String::new();
            for fa in &adm.families {
                let _ = writeln!(out, "{:<14} {}", fa.family.as_str(), if fa.satisfied { "admissible" } else { "violated" });
                for c in &fa.violated_constraints {
                    let _ = writeln!(out, "  {:<40} lhs {:>24}  rhs {:>24}", c.name, num(c.lhs), num(c.rhs));
                }
            }
            for w in &adm.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            out
        }
        _ => to_json(&json!({
            "params": cfg.params,
            "families": adm.families,
            "warnings": adm.warnings,
        }))?,
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(())
}

fn steady(cfg: &RunConfig) -> Result<(), CliError> {
    let format = cfg.format_or(Format::Json, &[Format::Json, Format::Csv])?;
    let ss = steady_state(&cfg.params).map_err(model_err)?;
    let rs = restricted_sigma(&cfg.params);
    let text = match format {
        Format::Csv => format!(
            "z_star,u_star,g_star,eta,restricted_sigma\n{},{},{},{},{}\n",
            num(ss.z_star),
            num(ss.u_star),
            num(ss.g_star),
            num(ss.eta),
            rs.map(num).unwrap_or_default()
        ),
        _ => to_json(&json!({
            "params": cfg.params,
            "z_star": ss.z_star,
            "u_star": ss.u_star,
            "g_star": ss.g_star,
            "eta": ss.eta,
            "restricted_sigma": rs,
            "restricted_sigma_denominator": restricted_sigma_denominator(&cfg.params),
        }))?,
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(())
}

fn zpath(cfg: &RunConfig) -> Result<(), CliError> {
    let format = cfg.format_or(Format::Csv, &[Format::Csv, Format::Json])?;
    cfg.params.check().map_err(model_err)?;
    let path = ZPath::new(&cfg.params, cfg.z0()?).map_err(model_err)?;
    let quad = cfg.quadrature();
    #[derive(Serialize)]
    struct Row {
        t: f64,
        z: f64,
        #[serde(rename = "F")]
        f: f64,
        #[serde(rename = "G")]
        g: f64,
    }
    let mut rows = Vec::with_capacity(cfg.grid.len());
    // Accumulate piecewise so each grid cell is integrated once.
    let (mut f, mut g) = (0.0, 0.0);
    let mut prev = 0.0;
    for &t in &cfg.grid {
        f += path.weighted_integral(cfg.params.f_decay(), prev, t, &quad).map_err(model_err)?.value;
        if !(cfg.params.g_decay() > 0.0) {
            return Err(model_err(growthlab::ZPathError::NonPositiveDecay { rate: cfg.params.g_decay() }));
        }
        g += path.weighted_integral(cfg.params.g_decay(), prev, t, &quad).map_err(model_err)?.value;
        prev = t;
        rows.push(Row { t, z: path.z_at(t).map_err(model_err)?, f, g });
    }
    let text = match format {
        Format::Json => to_json(&rows)?,
        _ => {
            let mut out = String::from("t,z,F,G\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{},{}", num(r.t), num(r.z), num(r.f), num(r.g));
            }
            out
        }
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(())
}

fn emit_trajectory(cfg: &RunConfig, tr: &Trajectory, provenance: Option<&str>) -> Result<(), CliError> {
    let format = cfg.format_or(Format::Csv, &[Format::Csv, Format::Json])?;
    let text = match format {
        Format::Json => to_json(tr)?,
        _ => trajectory_csv(&tr.points, provenance),
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(())
}

fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let fam = cfg.pin(cfg.family)?;
    let tr = Trajectory::sample(&fam, Provenance::Family(cfg.family), &cfg.grid)?;
    emit_trajectory(cfg, &tr, None)
}

fn integrate(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.grid[0] != 0.0 {
        return Err(CliError::Usage("the integration grid must start at t = 0".into()));
    }
    let fam = cfg.pin(cfg.family)?;
    let start = fam.eval(0.0).map_err(model_err)?;
    let tr = integrate_grid(&cfg.params, &start.primal(), &cfg.grid, &cfg.integrator()).map_err(model_err)?;
    if let Some(t) = tr.u_excursion {
        eprintln!("warning: u exceeds 1 from t = {t}");
    }
    emit_trajectory(cfg, &tr, Some(Provenance::Numeric.label()))
}

fn verify_options(cfg: &RunConfig, args: &VerifyArgs) -> VerifyOptions {
    let mut o = VerifyOptions::default();
    let v = &cfg.verify;
    if cfg.grid_explicit {
        o.grid = cfg.grid.clone();
    }
    o.drift_threshold = v.drift_threshold.unwrap_or(o.drift_threshold);
    o.residual_threshold = v.residual_threshold.unwrap_or(o.residual_threshold);
    o.residual = ResidualOptions { step: v.residual_step.unwrap_or(o.residual.step), ..o.residual };
    o.checkpoints = args.checkpoints.clone().or(v.checkpoints.clone()).unwrap_or(o.checkpoints);
    o.transversality_epsilon = args.epsilon.or(v.epsilon).unwrap_or(o.transversality_epsilon);
    o.convergence_horizons = v.convergence_horizons.clone().or(o.convergence_horizons);
    o.convergence_threshold = v.convergence_threshold.unwrap_or(o.convergence_threshold);
    o.oracle_horizon = v.oracle_horizon.unwrap_or(o.oracle_horizon);
    o.oracle_threshold = v.oracle_threshold.unwrap_or(o.oracle_threshold);
    if args.no_oracle || v.oracle == Some(false) {
        o.oracle = None;
    } else if let Some(tol) = v.oracle_tol {
        o.oracle = Some(growthlab::IntegratorOptions::with_tol(tol));
    }
    o
}

fn verify_cmd(args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.model)?;
    cfg.format_or(Format::Json, &[Format::Json])?;
    let fam = cfg.pin(cfg.family)?;
    let opts = verify_options(&cfg, args);
    let report = verify::verify_family(&fam, &opts).map_err(model_err)?;
    emit(cfg.output.as_deref(), &to_json(&report)?)?;
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        Err(CliError::Verification(failed.join(", ")))
    }
}

fn gaps_csv(cmp: &FamilyComparison) -> String {
    let mut out = String::from("t,c,k,lambda,mu,u,h\n");
    for r in &cmp.rows {
        let cols = [r.t, r.c, r.k, r.lambda, r.mu, r.u, r.h].map(num);
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.model)?;
    let format = cfg.format_or(Format::Json, &[Format::Json, Format::Csv])?;
    let terminal = match args.terminal {
        Some(t) => t,
        None => 200.0 / steady_state(&cfg.params).map_err(model_err)?.g_star.abs(),
    };
    let cmp = verify::compare_families(&cfg.params, cfg.k0, cfg.z0()?, &cfg.grid, args.probe, terminal, &cfg.quadrature())
        .map_err(model_err)?;
    let mut summary = serde_json::to_value(&cmp)?;
    if let Some(m) = summary.as_object_mut() {
        m.remove("rows");
        m.insert("grid_points".into(), json!(cmp.rows.len()));
    }
    if let Some(path) = &args.gaps {
        emit(Some(path), &gaps_csv(&cmp))?;
    }
    match format {
        Format::Csv => {
            emit(cfg.output.as_deref(), &gaps_csv(&cmp))?;
            eprint!("{}", to_json(&summary)?);
        }
        _ => emit(cfg.output.as_deref(), &to_json(&summary)?)?,
    }
    Ok(())
}

fn sweep_cmd(args: &SweepArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.model)?;
    let format = cfg.format_or(Format::Csv, &[Format::Csv, Format::Json])?;
    let mut spec: SweepSpec = cfg.sweep.clone().unwrap_or_default();
    for v in &args.vary {
        spec.set(v)?;
    }
    if let Some(o) = &args.outputs {
        spec.outputs = Some(o.clone());
    }
    if let Some(m) = args.max_points {
        spec.max_points = Some(m);
    }
    let ctx = SweepContext {
        base: cfg.params,
        k0: cfg.k0,
        z0_ratio: cfg.z0_ratio().unwrap_or(0.5),
        quad: cfg.quadrature(),
    };
    let table = sweep::run(&spec, &ctx)?;
    let text = match format {
        Format::Json => to_json(&table.to_json_value())?,
        _ => table.to_csv(),
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(())
}

const LEVELS: [&str; 7] = ["c", "k", "h", "u", "z", "lambda", "mu"];
const GROWTH: [&str; 6] = ["growth_c", "growth_k", "growth_h", "growth_u", "growth_lambda", "growth_mu"];

fn plot_rows<S: StateSource>(series: &str, source: &S, grid: &[f64], vars: &[String], out: &mut String) -> Result<(), CliError> {
    let need_growth = vars.iter().any(|v| v.starts_with("growth_"));
    for &t in grid {
        let s = source.state_at(t)?;
        let slopes = if need_growth { Some(log_slopes(source, t, 1e-4 * t.max(1.0)).map_err(model_err)?) } else { None };
        for v in vars {
            let value = match v.as_str() {
                "c" => s.c,
                "k" => s.k,
                "h" => s.h,
                "u" => s.u,
                "z" => s.z,
                "lambda" => s.lambda,
                "mu" => s.mu,
                g => {
                    let j = GROWTH.iter().position(|x| *x == g).expect("validated variable");
                    slopes.expect("computed when requested")[j]
                }
            };
            let _ = writeln!(out, "{series},{},{v},{}", num(t), num(value));
        }
    }
    Ok(())
}

fn plotdata(args: &PlotArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.model)?;
    cfg.format_or(Format::Csv, &[Format::Csv])?;
    let families = args.families.clone().or(cfg.plot.families.clone()).unwrap_or_else(|| vec![cfg.family]);
    if families.is_empty() {
        return Err(CliError::Usage("plotdata needs at least one family".into()));
    }
    let vars = args
        .variables
        .clone()
        .or(cfg.plot.variables.clone())
        .unwrap_or_else(|| LEVELS.iter().chain(GROWTH.iter()).map(|s| s.to_string()).collect());
    if let Some(bad) = vars.iter().find(|v| !LEVELS.contains(&v.as_str()) && !GROWTH.contains(&v.as_str())) {
        return Err(CliError::Usage(format!("unknown plot variable `{bad}`")));
    }
    let numeric = args.numeric || cfg.plot.numeric.unwrap_or(false);
    let mut out = String::from("series,t,variable,value\n");
    for family in families {
        let fam = cfg.pin(family)?;
        plot_rows(family.as_str(), &fam, &cfg.grid, &vars, &mut out)?;
        if numeric {
            let start = fam.eval(0.0).map_err(model_err)?.primal();
            // Run slightly past the grid so the last central difference has a right neighbour.
            let last = *cfg.grid.last().expect("grid has two points");
            let mut times = cfg.grid.clone();
            times.push(last + 1e-3 * last.max(1.0));
            let tr = integrate_grid(&cfg.params, &start, &times, &cfg.integrator()).map_err(model_err)?;
            plot_rows(&format!("numeric:{family}"), &tr, &cfg.grid, &vars, &mut out)?;
        }
    }
    emit(cfg.output.as_deref(), &out)?;
    Ok(())
}
