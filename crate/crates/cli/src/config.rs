use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use growthlab::verify::uniform_grid;
use growthlab::{
    pin, steady_state, EconomyParams, Family, IntegratorOptions, QuadratureConfig, SolutionFamily,
};
use serde::Deserialize;

use crate::error::CliError;
use crate::sweep::SweepSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Flags shared by every model subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// JSON run configuration; explicit flags take precedence over its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub pi: Option<f64>,
    /// bgp, two-integral or one-integral.
    #[arg(long)]
    pub family: Option<Family>,
    /// Initial physical capital.
    #[arg(long)]
    pub k0: Option<f64>,
    /// Initial ratio z = hu/k.
    #[arg(long, conflicts_with = "z0_ratio")]
    pub z0: Option<f64>,
    /// Initial ratio as a multiple of z*.
    #[arg(long)]
    pub z0_ratio: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of grid points, including both ends.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Integrator tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative tolerance of the quadratures.
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsPatch {
    pub sigma: Option<f64>,
    pub rho: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub pi: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyPatch {
    pub drift_threshold: Option<f64>,
    pub residual_threshold: Option<f64>,
    pub residual_step: Option<f64>,
    pub checkpoints: Option<Vec<f64>>,
    pub epsilon: Option<f64>,
    pub convergence_horizons: Option<Vec<f64>>,
    pub convergence_threshold: Option<f64>,
    pub oracle: Option<bool>,
    pub oracle_tol: Option<f64>,
    pub oracle_horizon: Option<f64>,
    pub oracle_threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotPatch {
    pub families: Option<Vec<Family>>,
    pub variables: Option<Vec<String>>,
    pub numeric: Option<bool>,
}

/// The JSON configuration file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub params: Option<ParamsPatch>,
    pub family: Option<Family>,
    pub k0: Option<f64>,
    pub z0: Option<f64>,
    pub z0_ratio: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub grid: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub quad_tol: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub verify: Option<VerifyPatch>,
    pub sweep: Option<SweepSpec>,
    pub plot: Option<PlotPatch>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

const DEFAULT_T_MAX: f64 = 50.0;
const DEFAULT_STEPS: usize = 101;
const DEFAULT_Z0_RATIO: f64 = 0.5;

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: EconomyParams,
    pub family: Family,
    pub k0: f64,
    z0: Option<f64>,
    z0_ratio: Option<f64>,
    pub grid: Vec<f64>,
    /// Whether the grid came from the user rather than the defaults.
    pub grid_explicit: bool,
    pub tol: f64,
    pub quad_tol: f64,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub verify: VerifyPatch,
    pub sweep: Option<SweepSpec>,
    pub plot: PlotPatch,
}

fn check_positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn resolve(args: &ModelArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let base = EconomyParams::canonical();
        let patch = file.params.clone().unwrap_or_default();
        let params = EconomyParams {
            sigma: args.sigma.or(patch.sigma).unwrap_or(base.sigma),
            rho: args.rho.or(patch.rho).unwrap_or(base.rho),
            beta: args.beta.or(patch.beta).unwrap_or(base.beta),
            gamma: args.gamma.or(patch.gamma).unwrap_or(base.gamma),
            delta: args.delta.or(patch.delta).unwrap_or(base.delta),
            pi: args.pi.or(patch.pi).unwrap_or(base.pi),
        };

        // A z0 flag overrides either form in the file, and likewise for the ratio.
        let (z0, z0_ratio) = match (args.z0, args.z0_ratio) {
            (Some(z), _) => (Some(z), None),
            (None, Some(r)) => (None, Some(r)),
            (None, None) => {
                if file.z0.is_some() && file.z0_ratio.is_some() {
                    return Err(CliError::Usage("config sets both z0 and z0_ratio".into()));
                }
                (file.z0, file.z0_ratio)
            }
        };
        if let Some(z) = z0 {
            check_positive("z0", z)?;
        }
        if let Some(r) = z0_ratio {
            check_positive("z0-ratio", r)?;
        }
        let k0 = check_positive("k0", args.k0.or(file.k0).unwrap_or(1.0))?;

        let flag_grid = args.t_max.is_some() || args.steps.is_some();
        let (grid, grid_explicit) = match (&file.grid, flag_grid) {
            (Some(g), false) => (g.clone(), true),
            _ => {
                let t_max = args.t_max.or(file.t_max);
                let steps = args.steps.or(file.steps);
                let explicit = t_max.is_some() || steps.is_some();
                let t_max = check_positive("t-max", t_max.unwrap_or(DEFAULT_T_MAX))?;
                let steps = steps.unwrap_or(DEFAULT_STEPS);
                if steps < 2 {
                    return Err(CliError::Usage(format!("steps must be at least 2, got {steps}")));
                }
                (uniform_grid(t_max, steps), explicit)
            }
        };
        check_grid(&grid)?;

        let tol = args.tol.or(file.tol).unwrap_or(IntegratorOptions::default().tol);
        if !(1e-13..=1e-3).contains(&tol) {
            return Err(CliError::Usage(format!("tol must lie in [1e-13, 1e-3], got {tol}")));
        }
        let quad_tol = args.quad_tol.or(file.quad_tol).unwrap_or(QuadratureConfig::default().rel_tol);
        if !(1e-14..=1e-3).contains(&quad_tol) {
            return Err(CliError::Usage(format!("quad-tol must lie in [1e-14, 1e-3], got {quad_tol}")));
        }

        Ok(Self {
            params,
            family: args.family.or(file.family).unwrap_or(Family::Bgp),
            k0,
            z0,
            z0_ratio,
            grid,
            grid_explicit,
            tol,
            quad_tol,
            format: args.format.or(file.format),
            output: args.output.clone().or(file.output),
            verify: file.verify.unwrap_or_default(),
            sweep: file.sweep,
            plot: file.plot.unwrap_or_default(),
        })
    }

    /// z0 as given, or as a multiple of z* (half of z* by default).
    pub fn z0(&self) -> Result<f64, CliError> {
        if let Some(z) = self.z0 {
            return Ok(z);
        }
        let zs = steady_state(&self.params).map_err(growthlab::Error::from)?.z_star;
        Ok(self.z0_ratio.unwrap_or(DEFAULT_Z0_RATIO) * zs)
    }

    pub fn z0_ratio(&self) -> Option<f64> {
        self.z0_ratio
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig::with_rel_tol(self.quad_tol)
    }

    pub fn integrator(&self) -> IntegratorOptions {
        IntegratorOptions::with_tol(self.tol)
    }

    pub fn pin(&self, family: Family) -> Result<SolutionFamily, CliError> {
        let z0 = if family == Family::Bgp { f64::NAN } else { self.z0()? };
        Ok(pin(&self.params, family, self.k0, z0, &self.quadrature()).map_err(growthlab::Error::from)?)
    }

    pub fn format_or(&self, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::Usage(format!("format {f:?} is not available for this command").to_lowercase()))
        }
    }
}

pub fn check_grid(grid: &[f64]) -> Result<(), CliError> {
    if grid.len() < 2 {
        return Err(CliError::Usage("the time grid needs at least two points".into()));
    }
    if grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(CliError::Usage("grid times must be finite and non-negative".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("grid times must be strictly increasing".into()));
    }
    Ok(())
}
