//! Checks on closed-form families and numeric trajectories: first-integral
//! drift, ODE residuals, transversality products, long-run growth rates and
//! the comparison of the two z ≠ z* families.

use serde::Serialize;

use crate::closed_form::{pin_one_integral, pin_two_integral, ConsumptionChoice, SolutionFamily};
use crate::dynamics::{integrate_grid, rhs_costate, rhs_primal};
use crate::error::{Error, ParamError, VerifyError};
use crate::ode::IntegratorOptions;
use crate::params::{EconomyParams, Family};
use crate::quadrature::QuadratureConfig;
use crate::state::{PrimalState, StatePoint, StateSource, Variable};

fn check_sigma(p: &EconomyParams) -> Result<(), VerifyError> {
    if p.sigma == 1.0 {
        Err(ParamError::SigmaOne.into())
    } else {
        Ok(())
    }
}

/// I1 = (γ(1−β)/δ) c^(−σ) k^β u^(−β) h^(−β) e^(−(ρ−δ)t).
pub fn eval_i1(p: &EconomyParams, t: f64, s: &PrimalState) -> Result<f64, VerifyError> {
    check_sigma(p)?;
    Ok(p.gamma * (1.0 - p.beta) / p.delta
        * s.c.powf(-p.sigma)
        * s.k.powf(p.beta)
        * s.u.powf(-p.beta)
        * s.h.powf(-p.beta)
        * (-(p.rho - p.delta) * t).exp())
}

fn i2_terms(p: &EconomyParams, s: &PrimalState) -> [f64; 4] {
    let z = s.z();
    [
        (p.rho + p.pi - p.pi * p.sigma) * s.k,
        -p.sigma * s.c,
        -p.beta * p.gamma * (1.0 - p.sigma) * z.powf(1.0 - p.beta) * s.k,
        (1.0 - p.beta) * p.gamma / p.delta * (p.rho - p.delta + p.delta * p.sigma) * z.powf(-p.beta) * s.h,
    ]
}

fn i2_prefactor(p: &EconomyParams, t: f64, s: &PrimalState) -> f64 {
    s.c.powf(-p.sigma) * (-p.rho * t).exp() / (1.0 - p.sigma)
}

/// I2 = c^(−σ) e^(−ρt)/(1−σ) · [(ρ+π−πσ)k − σc − βγ(1−σ)z^(1−β)k + ((1−β)γ/δ)(ρ−δ+δσ)z^(−β)h].
pub fn eval_i2(p: &EconomyParams, t: f64, s: &PrimalState) -> Result<f64, VerifyError> {
    check_sigma(p)?;
    Ok(i2_prefactor(p, t, s) * i2_terms(p, s).iter().sum::<f64>())
}

/// Magnitude of the individual terms of I2; the natural yardstick when I2 itself is zero.
pub fn i2_scale(p: &EconomyParams, t: f64, s: &PrimalState) -> f64 {
    i2_prefactor(p, t, s).abs() * i2_terms(p, s).iter().map(|x| x.abs()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftReport {
    pub i1_initial: f64,
    pub i2_initial: f64,
    /// max |I1(t) − I1(0)| / |I1(0)|.
    pub i1: f64,
    /// max |I2(t) − I2(0)| / max(|I2(0)|, scale of its terms at t = 0).
    pub i2: f64,
}

pub fn integral_drift<S: StateSource + ?Sized>(source: &S, times: &[f64]) -> Result<DriftReport, VerifyError> {
    let p = *source.params();
    let first = times.first().ok_or(VerifyError::InvalidCheckpoints)?;
    let s0 = state(source, *first)?;
    let i1_0 = eval_i1(&p, s0.t, &s0.primal())?;
    let i2_0 = eval_i2(&p, s0.t, &s0.primal())?;
    let norm2 = i2_0.abs().max(i2_scale(&p, s0.t, &s0.primal()));
    let mut report = DriftReport { i1_initial: i1_0, i2_initial: i2_0, i1: 0.0, i2: 0.0 };
    for &t in times {
        let s = state(source, t)?;
        let i1 = eval_i1(&p, t, &s.primal())?;
        let i2 = eval_i2(&p, t, &s.primal())?;
        report.i1 = report.i1.max((i1 - i1_0).abs() / i1_0.abs());
        report.i2 = report.i2.max((i2 - i2_0).abs() / norm2);
    }
    Ok(report)
}

fn state<S: StateSource + ?Sized>(source: &S, t: f64) -> Result<StatePoint, VerifyError> {
    source.state_at(t).map_err(|e| match e {
        Error::ClosedForm(e) => VerifyError::ClosedForm(e),
        Error::Integrator(e) => VerifyError::Integrator(e),
        Error::Param(e) => VerifyError::Param(e),
        Error::Verify(e) => e,
        Error::ZPath(e) => VerifyError::ClosedForm(e.into()),
        Error::Quadrature(e) => VerifyError::ClosedForm(crate::error::ZPathError::from(e).into()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualOptions {
    /// Central-difference step.
    pub step: f64,
    pub scale_floor: f64,
    /// Largest Richardson estimate of the differencing error, relative to the
    /// equation's scale, that is still accepted.
    pub differencing_ceiling: f64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self { step: 1e-4, scale_floor: 1e-30, differencing_ceiling: 1e-3 }
    }
}

const EQUATIONS: [Variable; 6] = [Variable::C, Variable::K, Variable::H, Variable::U, Variable::Lambda, Variable::Mu];

/// Largest relative residual of each equation over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub c: f64,
    pub k: f64,
    pub h: f64,
    pub u: f64,
    pub lambda: f64,
    pub mu: f64,
    pub max: f64,
    pub worst_equation: &'static str,
    pub worst_time: f64,
}

impl ResidualReport {
    pub fn get(&self, var: Variable) -> f64 {
        match var {
            Variable::C => self.c,
            Variable::K => self.k,
            Variable::H => self.h,
            Variable::U => self.u,
            Variable::Lambda => self.lambda,
            Variable::Mu => self.mu,
            Variable::Z => 0.0,
        }
    }
}

/// Right-hand side of each equation together with the summed magnitude of its terms.
fn rhs_with_scale(p: &EconomyParams, s: &StatePoint) -> Result<[(f64, f64); 6], VerifyError> {
    let prim = rhs_primal(p, s.t, &s.primal())?;
    let co = rhs_costate(p, s.t, &s.costate())?;
    let z = s.primal().z();
    let zp = z.powf(1.0 - p.beta);
    let a = (p.delta + p.pi) * (1.0 - p.beta) / p.beta;
    let output = p.gamma * s.k * zp;
    Ok([
        (prim.c, s.c * (p.beta * p.gamma * zp + p.rho + p.pi) / p.sigma),
        (prim.k, output + p.pi * s.k + s.c),
        (prim.h, p.delta * s.h * (1.0 + s.u)),
        (prim.u, s.u * (a + s.c / s.k + p.delta * s.u)),
        (co.lambda, s.lambda * (p.beta * p.gamma * zp + p.rho + p.pi)),
        (co.mu, s.mu * (p.rho - p.delta).abs()),
    ])
}

fn derivative<S: StateSource + ?Sized>(source: &S, t: f64, h: f64) -> Result<[f64; 6], VerifyError> {
    let get = |t: f64| -> Result<[f64; 6], VerifyError> {
        let s = state(source, t)?;
        Ok(EQUATIONS.map(|v| s.get(v)))
    };
    if t >= h {
        let (a, b) = (get(t - h)?, get(t + h)?);
        Ok(std::array::from_fn(|j| (b[j] - a[j]) / (2.0 * h)))
    } else {
        let (x0, x1, x2) = (get(t)?, get(t + h)?, get(t + 2.0 * h)?);
        Ok(std::array::from_fn(|j| (-3.0 * x0[j] + 4.0 * x1[j] - x2[j]) / (2.0 * h)))
    }
}

/// Compares finite-difference time derivatives of `source` with the model's
/// right-hand sides. Each residual is scaled by the larger of |ẋ| and the
/// summed magnitude of the terms making up ẋ.
pub fn residuals<S: StateSource + ?Sized>(
    source: &S,
    grid: &[f64],
    opts: &ResidualOptions,
) -> Result<ResidualReport, VerifyError> {
    let p = *source.params();
    let mut worst = [0.0f64; 6];
    let mut report = ResidualReport {
        c: 0.0,
        k: 0.0,
        h: 0.0,
        u: 0.0,
        lambda: 0.0,
        mu: 0.0,
        max: 0.0,
        worst_equation: "c",
        worst_time: grid.first().copied().unwrap_or(0.0),
    };
    for &t in grid {
        let s = state(source, t)?;
        let rhs = rhs_with_scale(&p, &s)?;
        let fd = derivative(source, t, opts.step)?;
        let fd2 = derivative(source, t, 2.0 * opts.step)?;
        for (j, ((value, terms), var)) in rhs.iter().zip(EQUATIONS).enumerate() {
            let scale = value.abs().max(*terms).max(opts.scale_floor);
            let richardson = (fd[j] - fd2[j]).abs() / 3.0 / scale;
            if richardson > opts.differencing_ceiling {
                return Err(VerifyError::GridTooCoarse { equation: var.name(), t, estimate: richardson });
            }
            let r = (fd[j] - value).abs() / scale;
            if r > worst[j] {
                worst[j] = r;
            }
            if r > report.max {
                report.max = r;
                report.worst_equation = var.name();
                report.worst_time = t;
            }
        }
    }
    [report.c, report.k, report.h, report.u, report.lambda, report.mu] = worst;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSeries {
    /// Value at t = 0, the reference for `final_relative`.
    pub initial: f64,
    pub values: Vec<f64>,
    /// values[i+1] / values[i].
    pub ratios: Vec<f64>,
    pub strictly_decreasing: bool,
    pub final_relative: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransversalityReport {
    pub checkpoints: Vec<f64>,
    pub epsilon: f64,
    /// e^(−ρt) λ k.
    pub lambda_k: ProductSeries,
    /// e^(−ρt) μ h.
    pub mu_h: ProductSeries,
    pub pass: bool,
}

/// Default relative level that the last checkpoint product must fall below.
pub const TRANSVERSALITY_EPSILON: f64 = 1e-2;

/// Evaluates both transversality products at the checkpoints. A product passes
/// when it decreases strictly across the checkpoints and its final value is
/// below `epsilon` times its value at t = 0.
pub fn check_transversality<S: StateSource + ?Sized>(
    source: &S,
    checkpoints: &[f64],
    epsilon: f64,
) -> Result<TransversalityReport, VerifyError> {
    if checkpoints.is_empty()
        || checkpoints.iter().any(|t| !(t.is_finite() && *t >= 0.0))
        || checkpoints.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(VerifyError::InvalidCheckpoints);
    }
    let p = *source.params();
    let products = |t: f64| -> Result<(f64, f64), VerifyError> {
        let s = state(source, t)?;
        let disc = (-p.rho * t).exp();
        Ok((disc * s.lambda * s.k, disc * s.mu * s.h))
    };
    let (lk0, mh0) = products(0.0)?;
    let mut lk = Vec::with_capacity(checkpoints.len());
    let mut mh = Vec::with_capacity(checkpoints.len());
    for &t in checkpoints {
        let (a, b) = products(t)?;
        lk.push(a);
        mh.push(b);
    }
    let series = |initial: f64, values: Vec<f64>| {
        let ratios: Vec<f64> = values.windows(2).map(|w| w[1] / w[0]).collect();
        let strictly_decreasing = values.windows(2).all(|w| w[1] < w[0]);
        let final_relative = values.last().copied().unwrap_or(f64::NAN) / initial;
        let pass = strictly_decreasing && final_relative.abs() < epsilon;
        ProductSeries { initial, values, ratios, strictly_decreasing, final_relative, pass }
    };
    let lambda_k = series(lk0, lk);
    let mu_h = series(mh0, mh);
    let pass = lambda_k.pass && mu_h.pass;
    Ok(TransversalityReport { checkpoints: checkpoints.to_vec(), epsilon, lambda_k, mu_h, pass })
}

/// Central-difference log-slope of each variable.
pub fn log_slopes<S: StateSource + ?Sized>(source: &S, t: f64, h: f64) -> Result<[f64; 6], VerifyError> {
    let get = |t: f64| -> Result<[f64; 6], VerifyError> {
        let s = state(source, t)?;
        Ok(EQUATIONS.map(|v| s.get(v).ln()))
    };
    let (lo, hi) = if t >= h { (t - h, t + h) } else { (t, t + 2.0 * h) };
    let (a, b) = (get(lo)?, get(hi)?);
    Ok(std::array::from_fn(|j| (b[j] - a[j]) / (hi - lo)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceEntry {
    pub horizon: f64,
    pub slope_c: f64,
    pub slope_k: f64,
    pub slope_h: f64,
    pub slope_u: f64,
    pub slope_lambda: f64,
    pub slope_mu: f64,
    /// |slope − target| in the order c, k, h, u, λ, μ.
    pub deviations: [f64; 6],
    pub u_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub g_star: f64,
    pub u_star: f64,
    pub entries: Vec<ConvergenceEntry>,
    /// Every deviation is non-increasing across horizons (up to `noise`).
    pub monotone: bool,
    pub threshold: f64,
    pub within_threshold: bool,
    pub pass: bool,
}

/// Noise level below which a growth of a deviation across horizons is ignored.
const SLOPE_NOISE: f64 = 1e-8;

/// Log-slopes at each horizon against the long-run targets: (δ−ρ)/σ for c, k
/// and h, zero for u, and ρ−δ for both prices. Slopes use central differences
/// with step `1e−4·max(1, T)`.
pub fn convergence_report<S: StateSource + ?Sized>(
    source: &S,
    horizons: &[f64],
    threshold: f64,
) -> Result<ConvergenceReport, VerifyError> {
    if horizons.is_empty() || horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(VerifyError::InvalidCheckpoints);
    }
    let p = *source.params();
    let g = p.growth_rate();
    let u_star = (p.rho - p.delta + p.delta * p.sigma) / (p.delta * p.sigma);
    let targets = [g, g, g, 0.0, p.rho - p.delta, p.rho - p.delta];
    let mut entries = Vec::new();
    for &t in horizons {
        let s = log_slopes(source, t, 1e-4 * t.max(1.0))?;
        let u = state(source, t)?.u;
        entries.push(ConvergenceEntry {
            horizon: t,
            slope_c: s[0],
            slope_k: s[1],
            slope_h: s[2],
            slope_u: s[3],
            slope_lambda: s[4],
            slope_mu: s[5],
            deviations: std::array::from_fn(|j| (s[j] - targets[j]).abs()),
            u_distance: (u - u_star).abs(),
        });
    }
    let monotone = entries.windows(2).all(|w| {
        (0..6).all(|j| w[1].deviations[j] <= w[0].deviations[j] + SLOPE_NOISE)
            && w[1].u_distance <= w[0].u_distance + SLOPE_NOISE
    });
    let last = entries.last().expect("non-empty");
    let within_threshold = last.deviations.iter().all(|d| *d < threshold) && last.u_distance < threshold;
    Ok(ConvergenceReport {
        g_star: g,
        u_star,
        entries,
        monotone,
        threshold,
        within_threshold,
        pass: monotone && within_threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub t: f64,
    pub c: f64,
    pub k: f64,
    pub lambda: f64,
    pub mu: f64,
    pub u: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyComparison {
    /// Largest relative gaps of c, k, λ, μ over the grid.
    pub max_rel_c: f64,
    pub max_rel_k: f64,
    pub max_rel_lambda: f64,
    pub max_rel_mu: f64,
    /// Largest absolute gaps of u and h over the grid.
    pub max_abs_u: f64,
    pub max_abs_h: f64,
    pub u0_two: f64,
    pub u0_one: f64,
    pub probe_time: f64,
    pub u_gap_at_probe: f64,
    pub h_gap_at_probe: f64,
    pub terminal_time: f64,
    pub u_terminal_two: f64,
    pub u_terminal_one: f64,
    pub u_terminal_gap: f64,
    pub u_star: f64,
    /// Per-time gaps (relative for c, k, λ, μ; absolute for u, h).
    pub rows: Vec<GapRow>,
}

/// Pins both z ≠ z* families from the same `(k0, z0)` and measures how far
/// apart they are on `grid`, at `probe_time`, and at `terminal_time`.
pub fn compare_families(
    p: &EconomyParams,
    k0: f64,
    z0: f64,
    grid: &[f64],
    probe_time: f64,
    terminal_time: f64,
    quad: &QuadratureConfig,
) -> Result<FamilyComparison, VerifyError> {
    let two = pin_two_integral(p, k0, z0, ConsumptionChoice::Transversality, quad)?;
    let one = pin_one_integral(p, k0, z0, quad)?;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    let mut rows = Vec::with_capacity(grid.len());
    for &t in grid {
        let a = two.eval(t)?;
        let b = one.eval(t)?;
        rows.push(GapRow {
            t,
            c: rel(a.c, b.c),
            k: rel(a.k, b.k),
            lambda: rel(a.lambda, b.lambda),
            mu: rel(a.mu, b.mu),
            u: (a.u - b.u).abs(),
            h: (a.h - b.h).abs(),
        });
    }
    let max = |f: fn(&GapRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let pa = two.eval(probe_time)?;
    let pb = one.eval(probe_time)?;
    let ta = two.eval(terminal_time)?;
    let tb = one.eval(terminal_time)?;
    Ok(FamilyComparison {
        max_rel_c: max(|r| r.c),
        max_rel_k: max(|r| r.k),
        max_rel_lambda: max(|r| r.lambda),
        max_rel_mu: max(|r| r.mu),
        max_abs_u: max(|r| r.u),
        max_abs_h: max(|r| r.h),
        u0_two: two.pinned().u0,
        u0_one: one.pinned().u0,
        probe_time,
        u_gap_at_probe: (pa.u - pb.u).abs(),
        h_gap_at_probe: (pa.h - pb.h).abs(),
        terminal_time,
        u_terminal_two: ta.u,
        u_terminal_one: tb.u,
        u_terminal_gap: (ta.u - tb.u).abs(),
        u_star: two.steady().u_star,
        rows,
    })
}

/// Closed form against the numerically integrated system from the same initial state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub horizon: f64,
    pub tol: f64,
    /// Largest relative gap over c, k, h, λ, μ.
    pub max_rel: f64,
    /// Largest absolute gap in u.
    pub max_abs_u: f64,
    pub worst_variable: &'static str,
}

pub fn compare_with_oracle(
    fam: &SolutionFamily,
    grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<OracleComparison, VerifyError> {
    let p = *fam.params_ref();
    let start = fam.eval(0.0)?;
    let tr = integrate_grid(&p, &start.primal(), grid, opts)?;
    let mut out = OracleComparison {
        horizon: grid.last().copied().unwrap_or(0.0),
        tol: opts.tol,
        max_rel: 0.0,
        max_abs_u: 0.0,
        worst_variable: "c",
    };
    for num in &tr.points {
        let exact = fam.eval(num.t)?;
        for var in [Variable::C, Variable::K, Variable::H, Variable::Lambda, Variable::Mu] {
            let r = (num.get(var) - exact.get(var)).abs() / exact.get(var).abs();
            if r > out.max_rel {
                out.max_rel = r;
                out.worst_variable = var.name();
            }
        }
        out.max_abs_u = out.max_abs_u.max((num.u - exact.u).abs());
    }
    Ok(out)
}

/// Evenly spaced grid `0, t_max/(n−1), …, t_max`.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub grid: Vec<f64>,
    pub residual: ResidualOptions,
    pub drift_threshold: f64,
    pub residual_threshold: f64,
    pub checkpoints: Vec<f64>,
    pub transversality_epsilon: f64,
    /// Horizons for the growth-rate checks; `None` uses 50/|g*| and twice that.
    pub convergence_horizons: Option<Vec<f64>>,
    pub convergence_threshold: f64,
    pub oracle: Option<IntegratorOptions>,
    pub oracle_horizon: f64,
    pub oracle_threshold: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: uniform_grid(20.0, 41),
            residual: ResidualOptions::default(),
            drift_threshold: 1e-9,
            residual_threshold: 1e-6,
            checkpoints: vec![10.0, 20.0, 40.0, 80.0],
            transversality_epsilon: TRANSVERSALITY_EPSILON,
            convergence_horizons: None,
            convergence_threshold: 1e-4,
            oracle: Some(IntegratorOptions::with_tol(1e-12)),
            oracle_horizon: 20.0,
            oracle_threshold: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub family: Family,
    pub params: EconomyParams,
    pub pinned: crate::closed_form::PinnedInitials,
    pub integral_drift: DriftReport,
    pub ode_residual: ResidualReport,
    pub transversality: TransversalityReport,
    pub convergence: ConvergenceReport,
    pub oracle: Option<OracleComparison>,
    pub family_comparison: Option<FamilyComparison>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Default long-run horizons: 50/|g*| and 100/|g*|.
pub fn default_horizons(p: &EconomyParams) -> Vec<f64> {
    let g = p.growth_rate().abs();
    let base = if g > 0.0 { 50.0 / g } else { 1000.0 };
    vec![base, 2.0 * base]
}

/// Runs every check on one pinned family. For the z ≠ z* families the
/// comparison block is filled in as well; it is informational and does not
/// enter `pass`.
pub fn verify_family(fam: &SolutionFamily, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let p = *fam.params_ref();
    let drift = integral_drift(fam, &opts.grid)?;
    let residual = residuals(fam, &opts.grid, &opts.residual)?;
    let transversality = check_transversality(fam, &opts.checkpoints, opts.transversality_epsilon)?;
    let horizons = opts.convergence_horizons.clone().unwrap_or_else(|| default_horizons(&p));
    let convergence = convergence_report(fam, &horizons, opts.convergence_threshold)?;
    let oracle = match &opts.oracle {
        Some(o) => Some(compare_with_oracle(fam, &uniform_grid(opts.oracle_horizon, 21), o)?),
        None => None,
    };
    let family_comparison = match fam.family() {
        Family::Bgp => None,
        _ => {
            let pin = fam.pinned();
            let terminal = 200.0 / p.growth_rate().abs();
            Some(compare_families(&p, pin.k0, pin.z0, &opts.grid, 1.0, terminal, fam.quadrature())?)
        }
    };

    let mut checks = vec![
        Check { name: "i1_drift", value: drift.i1, threshold: opts.drift_threshold, pass: drift.i1 <= opts.drift_threshold },
        Check { name: "i2_drift", value: drift.i2, threshold: opts.drift_threshold, pass: drift.i2 <= opts.drift_threshold },
        Check {
            name: "ode_residual",
            value: residual.max,
            threshold: opts.residual_threshold,
            pass: residual.max <= opts.residual_threshold,
        },
        Check {
            name: "transversality_lambda_k",
            value: transversality.lambda_k.final_relative,
            threshold: opts.transversality_epsilon,
            pass: transversality.lambda_k.pass,
        },
        Check {
            name: "transversality_mu_h",
            value: transversality.mu_h.final_relative,
            threshold: opts.transversality_epsilon,
            pass: transversality.mu_h.pass,
        },
        Check {
            name: "growth_rate_convergence",
            value: convergence.entries.last().map(|e| e.deviations.iter().cloned().fold(e.u_distance, f64::max)).unwrap_or(f64::NAN),
            threshold: opts.convergence_threshold,
            pass: convergence.pass,
        },
    ];
    if let Some(o) = &oracle {
        let worst = o.max_rel.max(o.max_abs_u);
        checks.push(Check { name: "oracle_agreement", value: worst, threshold: opts.oracle_threshold, pass: worst <= opts.oracle_threshold });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        family: fam.family(),
        params: p,
        pinned: *fam.pinned(),
        integral_drift: drift,
        ode_residual: residual,
        transversality,
        convergence,
        oracle,
        family_comparison,
        checks,
        pass,
    })
}
