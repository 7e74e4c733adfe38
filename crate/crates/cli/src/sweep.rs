use clap::ValueEnum;
use growthlab::params::restricted_sigma;
use growthlab::{
    pin_one_integral, pin_two_integral, steady_state, validate_params, ConsumptionChoice, EconomyParams, Family,
    QuadratureConfig,
};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::CliError;
use crate::output::{num, opt_num};

pub const DEFAULT_MAX_POINTS: usize = 1_000_000;
const PARAM_NAMES: [&str; 6] = ["sigma", "rho", "beta", "gamma", "delta", "pi"];

/// Values taken by one parameter: an evenly spaced range or an explicit list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Range { min: f64, max: f64, count: usize },
    List(Vec<f64>),
}

impl Axis {
    /// `min:max:count`, a comma-separated list, or a single value.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let number = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.len() {
            3 => Ok(Axis::Range {
                min: number(parts[0])?,
                max: number(parts[1])?,
                count: parts[2].trim().parse().map_err(|_| format!("`{}` is not a count", parts[2]))?,
            }),
            1 => Ok(Axis::List(spec.split(',').map(number).collect::<Result<_, _>>()?)),
            _ => Err(format!("`{spec}` is neither min:max:count nor a list")),
        }
    }

    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let v = match self {
            Axis::Range { min, max, count } => {
                if *count == 0 || !min.is_finite() || !max.is_finite() {
                    return Err(CliError::Usage("a sweep range needs finite bounds and count ≥ 1".into()));
                }
                if *count == 1 {
                    vec![*min]
                } else {
                    (0..*count).map(|i| min + (max - min) * i as f64 / (*count - 1) as f64).collect()
                }
            }
            Axis::List(v) => v.clone(),
        };
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Usage("sweep values must be finite and non-empty".into()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepOutput {
    /// One true/false column per family.
    Admissibility,
    ZStar,
    UStar,
    /// |σ − σ_r|/σ_r for the restricted value σ_r, when it exists.
    RestrictedSigma,
    /// |u_two(T) − u_one(T)| at T = 200/g*.
    TerminalUGap,
}

impl SweepOutput {
    pub const ALL: [SweepOutput; 5] = [
        SweepOutput::Admissibility,
        SweepOutput::ZStar,
        SweepOutput::UStar,
        SweepOutput::RestrictedSigma,
        SweepOutput::TerminalUGap,
    ];

    fn columns(&self) -> &'static [&'static str] {
        match self {
            SweepOutput::Admissibility => &["bgp", "two_integral", "one_integral"],
            SweepOutput::ZStar => &["z_star"],
            SweepOutput::UStar => &["u_star"],
            SweepOutput::RestrictedSigma => &["restricted_sigma_distance"],
            SweepOutput::TerminalUGap => &["terminal_u_gap"],
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub sigma: Option<Axis>,
    pub rho: Option<Axis>,
    pub beta: Option<Axis>,
    pub gamma: Option<Axis>,
    pub delta: Option<Axis>,
    pub pi: Option<Axis>,
    pub outputs: Option<Vec<SweepOutput>>,
    pub max_points: Option<usize>,
}

impl SweepSpec {
    fn axis_mut(&mut self, name: &str) -> Option<&mut Option<Axis>> {
        Some(match name {
            "sigma" => &mut self.sigma,
            "rho" => &mut self.rho,
            "beta" => &mut self.beta,
            "gamma" => &mut self.gamma,
            "delta" => &mut self.delta,
            "pi" => &mut self.pi,
            _ => return None,
        })
    }

    /// Applies a `name=spec` flag.
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let (name, spec) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected NAME=VALUES, got `{assignment}`")))?;
        let axis = Axis::parse(spec).map_err(CliError::Usage)?;
        let slot = self
            .axis_mut(name.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown sweep parameter `{name}`")))?;
        *slot = Some(axis);
        Ok(())
    }

    fn axes(&self) -> [&Option<Axis>; 6] {
        [&self.sigma, &self.rho, &self.beta, &self.gamma, &self.delta, &self.pi]
    }
}

/// Settings shared by every sweep point.
#[derive(Debug, Clone)]
pub struct SweepContext {
    pub base: EconomyParams,
    pub k0: f64,
    pub z0_ratio: f64,
    pub quad: QuadratureConfig,
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(Option<f64>),
    Flag(Option<bool>),
}

pub struct SweepTable {
    columns: Vec<&'static str>,
    rows: Vec<(EconomyParams, &'static str, Vec<Cell>)>,
}

/// Parameter sets of the sweep in grid order, the last parameter varying fastest.
pub fn grid_points(spec: &SweepSpec, base: &EconomyParams) -> Result<Vec<EconomyParams>, CliError> {
    let base_values = [base.sigma, base.rho, base.beta, base.gamma, base.delta, base.pi];
    let mut axes = Vec::with_capacity(6);
    for (axis, b) in spec.axes().into_iter().zip(base_values) {
        axes.push(match axis {
            Some(a) => a.values()?,
            None => vec![b],
        });
    }
    let cap = spec.max_points.unwrap_or(DEFAULT_MAX_POINTS);
    let total = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len()));
    match total {
        Some(n) if n <= cap => {}
        _ => {
            return Err(CliError::Usage(format!(
                "sweep grid has {} points, above the cap of {cap}",
                total.map(|n| n.to_string()).unwrap_or_else(|| "too many".into())
            )))
        }
    }
    let mut points = Vec::with_capacity(total.unwrap_or(0));
    let mut idx = [0usize; 6];
    'grid: loop {
        let v: [f64; 6] = std::array::from_fn(|i| axes[i][idx[i]]);
        points.push(EconomyParams::new(v[0], v[1], v[2], v[3], v[4], v[5]));
        let mut d = idx.len();
        loop {
            if d == 0 {
                break 'grid;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
    Ok(points)
}

fn evaluate(p: &EconomyParams, outputs: &[SweepOutput], ctx: &SweepContext) -> (&'static str, Vec<Cell>) {
    let adm = validate_params(p).ok();
    let steady = steady_state(p).ok();
    let mut status = if adm.is_some() { "ok" } else { "invalid" };
    let mut cells = Vec::new();
    for out in outputs {
        match out {
            SweepOutput::Admissibility => {
                for f in Family::ALL {
                    cells.push(Cell::Flag(adm.as_ref().map(|a| a.is_admissible(f))));
                }
            }
            SweepOutput::ZStar => cells.push(Cell::Num(steady.map(|s| s.z_star))),
            SweepOutput::UStar => cells.push(Cell::Num(steady.map(|s| s.u_star))),
            SweepOutput::RestrictedSigma => {
                cells.push(Cell::Num(restricted_sigma(p).map(|s| (p.sigma - s).abs() / s)));
            }
            SweepOutput::TerminalUGap => {
                let both = adm
                    .as_ref()
                    .map(|a| a.is_admissible(Family::TwoIntegral) && a.is_admissible(Family::OneIntegral))
                    .unwrap_or(false);
                let gap = if both {
                    match terminal_u_gap(p, ctx) {
                        Ok(g) => Some(g),
                        Err(_) => {
                            status = "numerical-failure";
                            None
                        }
                    }
                } else {
                    None
                };
                cells.push(Cell::Num(gap));
            }
        }
    }
    (status, cells)
}

fn terminal_u_gap(p: &EconomyParams, ctx: &SweepContext) -> Result<f64, growthlab::Error> {
    let z0 = ctx.z0_ratio * steady_state(p)?.z_star;
    let two = pin_two_integral(p, ctx.k0, z0, ConsumptionChoice::Transversality, &ctx.quad)?;
    let one = pin_one_integral(p, ctx.k0, z0, &ctx.quad)?;
    let t = 200.0 / p.growth_rate();
    Ok((two.eval(t)?.u - one.eval(t)?.u).abs())
}

/// Size of the worker pool: `GROWTHLAB_THREADS` if set, otherwise rayon's default.
pub fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var("GROWTHLAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("GROWTHLAB_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

pub fn run(spec: &SweepSpec, ctx: &SweepContext) -> Result<SweepTable, CliError> {
    let points = grid_points(spec, &ctx.base)?;
    let outputs = spec.outputs.clone().unwrap_or_else(|| SweepOutput::ALL.to_vec());
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    // An indexed parallel collect keeps grid order whatever the completion order.
    let rows = pool.install(|| {
        points
            .par_iter()
            .map(|p| {
                let (status, cells) = evaluate(p, &outputs, ctx);
                (*p, status, cells)
            })
            .collect::<Vec<_>>()
    });
    let columns = outputs.iter().flat_map(|o| o.columns().iter().copied()).collect();
    Ok(SweepTable { columns, rows })
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = PARAM_NAMES.join(",");
        out.push_str(",status");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (p, status, cells) in &self.rows {
            let mut line: Vec<String> = [p.sigma, p.rho, p.beta, p.gamma, p.delta, p.pi].map(num).to_vec();
            line.push(status.to_string());
            for cell in cells {
                line.push(match cell {
                    Cell::Num(v) => opt_num(*v),
                    Cell::Flag(b) => b.map(|b| b.to_string()).unwrap_or_default(),
                });
            }
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|(p, status, cells)| {
                let mut m = Map::new();
                for (name, v) in PARAM_NAMES.iter().zip([p.sigma, p.rho, p.beta, p.gamma, p.delta, p.pi]) {
                    m.insert(name.to_string(), Value::from(v));
                }
                m.insert("status".into(), Value::from(*status));
                for (name, cell) in self.columns.iter().zip(cells) {
                    let v = match cell {
                        Cell::Num(v) => v.map(Value::from).unwrap_or(Value::Null),
                        Cell::Flag(b) => b.map(Value::from).unwrap_or(Value::Null),
                    };
                    m.insert(name.to_string(), v);
                }
                Value::Object(m)
            })
            .collect();
        Value::Array(rows)
    }
}
