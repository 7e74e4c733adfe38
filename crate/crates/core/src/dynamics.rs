//! The first-order conditions as an ODE system, and a numerical integrator
//! that serves as an independent oracle for the closed forms.

use serde::Serialize;

use crate::error::{Error, IntegratorError};
use crate::ode::{dopri5, IntegratorOptions, IntegratorStats, Solution};
use crate::params::{EconomyParams, Family};
use crate::state::{CostateState, PrimalState, StatePoint, StateSource};

fn require_positive(t: f64, values: [(&'static str, f64); 4]) -> Result<(), IntegratorError> {
    for (component, v) in values {
        if !(v > 0.0) {
            return Err(IntegratorError::NonpositiveState { t, component });
        }
    }
    Ok(())
}

/// (k̇, ḣ, λ̇, μ̇) with c = λ^(−1/σ) and u from the interior condition
/// u^β = γ(1−β)k^β h^(−β) λ/(δμ).
pub fn rhs_costate(p: &EconomyParams, t: f64, s: &CostateState) -> Result<CostateState, IntegratorError> {
    require_positive(t, [("k", s.k), ("h", s.h), ("lambda", s.lambda), ("mu", s.mu)])?;
    let c = s.lambda.powf(-1.0 / p.sigma);
    let u = s.labour_share(p);
    let output = p.gamma * s.k.powf(p.beta) * (u * s.h).powf(1.0 - p.beta);
    let mpk = p.gamma * p.beta * u.powf(1.0 - p.beta) * s.k.powf(p.beta - 1.0) * s.h.powf(1.0 - p.beta);
    Ok(CostateState {
        k: output - p.pi * s.k - c,
        h: p.delta * (1.0 - u) * s.h,
        lambda: -s.lambda * mpk + s.lambda * (p.rho + p.pi),
        mu: s.mu * (p.rho - p.delta),
    })
}

/// (ċ, k̇, ḣ, u̇) from the capital accumulation laws and the growth rates of
/// consumption and the labour share.
pub fn rhs_primal(p: &EconomyParams, t: f64, s: &PrimalState) -> Result<PrimalState, IntegratorError> {
    require_positive(t, [("c", s.c), ("k", s.k), ("h", s.h), ("u", s.u)])?;
    let [gc, gk, gh, gu] = log_rates(p, s.c / s.k, s.z(), s.u);
    Ok(PrimalState { c: s.c * gc, k: s.k * gk, h: s.h * gh, u: s.u * gu })
}

/// Growth rates (ċ/c, k̇/k, ḣ/h, u̇/u) as functions of c/k, z and u.
fn log_rates(p: &EconomyParams, c_over_k: f64, z: f64, u: f64) -> [f64; 4] {
    let zp = z.powf(1.0 - p.beta);
    [
        (p.beta * p.gamma * zp - (p.rho + p.pi)) / p.sigma,
        p.gamma * zp - p.pi - c_over_k,
        p.delta * (1.0 - u),
        (p.delta + p.pi) * (1.0 - p.beta) / p.beta - c_over_k + p.delta * u,
    ]
}

/// Right-hand side in (ln c, ln k, ln h, ln u).
fn rhs_log(p: &EconomyParams, y: &[f64; 4]) -> [f64; 4] {
    let c_over_k = (y[0] - y[1]).exp();
    let z = (y[3] + y[2] - y[1]).exp();
    log_rates(p, c_over_k, z, y[3].exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Family(Family),
    Numeric,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Family(f) => f.as_str(),
            Provenance::Numeric => "numeric",
        }
    }
}

/// A sampled solution of the model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub params: EconomyParams,
    pub provenance: Provenance,
    pub points: Vec<StatePoint>,
    pub stats: Option<IntegratorStats>,
    /// First time at which u left (0, 1], if it did. u is not clamped.
    pub u_excursion: Option<f64>,
    #[serde(skip)]
    dense: Option<Solution<4>>,
}

impl Trajectory {
    pub fn from_points(params: EconomyParams, provenance: Provenance, points: Vec<StatePoint>) -> Self {
        let u_excursion = points.iter().find(|s| s.u > 1.0).map(|s| s.t);
        Self { params, provenance, points, stats: None, u_excursion, dense: None }
    }

    /// Evaluates `source` on `times`.
    pub fn sample<S: StateSource>(source: &S, provenance: Provenance, times: &[f64]) -> Result<Self, Error> {
        let points = times.iter().map(|&t| source.state_at(t)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_points(*source.params(), provenance, points))
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|s| s.t)
    }

    /// Dense output between accepted steps (numeric trajectories only).
    pub fn at(&self, t: f64) -> Option<StatePoint> {
        let y = self.dense.as_ref()?.interpolate(t)?;
        Some(point_from_log(&self.params, t, &y))
    }
}

impl StateSource for Trajectory {
    fn params(&self) -> &EconomyParams {
        &self.params
    }

    fn state_at(&self, t: f64) -> Result<StatePoint, Error> {
        if let Some(s) = self.points.iter().find(|s| s.t == t) {
            return Ok(*s);
        }
        self.at(t).ok_or(Error::Integrator(IntegratorError::InvalidGrid))
    }
}

fn point_from_log(p: &EconomyParams, t: f64, y: &[f64; 4]) -> StatePoint {
    let s = PrimalState { c: y[0].exp(), k: y[1].exp(), h: y[2].exp(), u: y[3].exp() };
    StatePoint::from_primal(p, t, &s)
}

/// Integrates from `initial` at t = 0 to `t_max`, recording every accepted step.
pub fn integrate(
    p: &EconomyParams,
    initial: &PrimalState,
    t_max: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory, IntegratorError> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(IntegratorError::InvalidGrid);
    }
    let sol = solve(p, initial, &[t_max], opts)?;
    let points = sol.nodes.iter().map(|n| point_from_log(p, n.t, &n.y)).collect();
    Ok(finish(p, points, sol))
}

/// Integrates from `initial` at t = 0 and reports the state exactly at each of `times`.
pub fn integrate_grid(
    p: &EconomyParams,
    initial: &PrimalState,
    times: &[f64],
    opts: &IntegratorOptions,
) -> Result<Trajectory, IntegratorError> {
    if times.is_empty() || times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(IntegratorError::InvalidGrid);
    }
    let sol = solve(p, initial, times, opts)?;
    let points = times
        .iter()
        .map(|&t| {
            let y = if t == 0.0 { sol.nodes[0].y } else { *sol.at_node(t).ok_or(IntegratorError::InvalidGrid)? };
            Ok(point_from_log(p, t, &y))
        })
        .collect::<Result<Vec<_>, IntegratorError>>()?;
    Ok(finish(p, points, sol))
}

fn solve(
    p: &EconomyParams,
    initial: &PrimalState,
    stops: &[f64],
    opts: &IntegratorOptions,
) -> Result<Solution<4>, IntegratorError> {
    p.check()?;
    initial.check_positive()?;
    let y0 = [initial.c.ln(), initial.k.ln(), initial.h.ln(), initial.u.ln()];
    dopri5(|_, y: &[f64; 4]| Ok(rhs_log(p, y)), 0.0, y0, stops, opts)
}

fn finish(p: &EconomyParams, points: Vec<StatePoint>, sol: Solution<4>) -> Trajectory {
    let u_excursion = sol.nodes.iter().find(|n| n.y[3] > 0.0).map(|n| n.t);
    Trajectory {
        params: *p,
        provenance: Provenance::Numeric,
        points,
        stats: Some(sol.stats),
        u_excursion,
        dense: Some(sol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::pin_bgp;
    use crate::params::steady_state;

    #[test]
    fn bgp_growth_rates_from_costate_form() {
        let p = EconomyParams::canonical();
        let fam = pin_bgp(&p, 1.0).unwrap();
        let s = fam.eval(0.0).unwrap();
        let d = rhs_costate(&p, 0.0, &s.costate()).unwrap();
        let g = p.growth_rate();
        assert!((d.k / s.k - g).abs() < 1e-14);
        assert!((d.h / s.h - g).abs() < 1e-14);
        assert!((d.lambda / s.lambda - (p.rho - p.delta)).abs() < 1e-14);
        assert!((d.mu / s.mu - (p.rho - p.delta)).abs() < 1e-15);
    }

    #[test]
    fn mu_rate_is_state_independent() {
        let p = EconomyParams::canonical();
        for (k, h, l, m) in [(1.0, 2.0, 3.0, 0.1), (0.2, 9.0, 0.5, 7.0)] {
            let d = rhs_costate(&p, 0.0, &CostateState { k, h, lambda: l, mu: m }).unwrap();
            assert!((d.mu / m - (p.rho - p.delta)).abs() < 1e-15);
        }
    }

    #[test]
    fn production_term_is_linear_in_gamma() {
        // Hold z fixed by holding (c, k, h, u) fixed and compare k̇ + πk + c.
        let p = EconomyParams::canonical();
        let q = EconomyParams { gamma: 2.0 * p.gamma, ..p };
        let s = PrimalState { c: 0.3, k: 1.1, h: 0.8, u: 0.6 };
        let a = rhs_primal(&p, 0.0, &s).unwrap().k + p.pi * s.k + s.c;
        let b = rhs_primal(&q, 0.0, &s).unwrap().k + q.pi * s.k + s.c;
        assert!((b - 2.0 * a).abs() < 1e-15);
    }

    #[test]
    fn primal_rates_at_steady_ratio() {
        let p = EconomyParams::canonical();
        let ss = steady_state(&p).unwrap();
        // z = z* with the balanced c/k ratio: ċ/c = g*, u̇ = 0 at u = u*.
        let k = 1.0;
        let u = ss.u_star;
        let h = ss.z_star * k / u;
        let c = p.f_decay() * k;
        let d = rhs_primal(&p, 0.0, &PrimalState { c, k, h, u }).unwrap();
        assert!((d.c / c - (p.delta - p.rho) / p.sigma).abs() < 1e-14);
        assert!(d.u.abs() < 1e-15);
    }

    #[test]
    fn nonpositive_states_are_rejected() {
        let p = EconomyParams::canonical();
        let r = rhs_primal(&p, 3.0, &PrimalState { c: 0.3, k: 1.0, h: 1.0, u: 0.0 });
        assert!(matches!(r, Err(IntegratorError::NonpositiveState { component: "u", .. })));
        let r = rhs_costate(&p, 3.0, &CostateState { k: -1.0, h: 1.0, lambda: 1.0, mu: 1.0 });
        assert!(matches!(r, Err(IntegratorError::NonpositiveState { component: "k", .. })));
    }

    #[test]
    fn integrate_records_accepted_steps() {
        let p = EconomyParams::canonical();
        let fam = pin_bgp(&p, 1.0).unwrap();
        let tr = integrate(&p, &fam.eval(0.0).unwrap().primal(), 10.0, &IntegratorOptions::default()).unwrap();
        assert_eq!(tr.points.first().unwrap().t, 0.0);
        assert_eq!(tr.points.last().unwrap().t, 10.0);
        assert!(tr.times().zip(tr.times().skip(1)).all(|(a, b)| b > a));
        assert_eq!(tr.u_excursion, None);
        let mid = tr.at(4.321).unwrap();
        let exact = fam.eval(4.321).unwrap();
        assert!((mid.c - exact.c).abs() < 1e-9 * exact.c);
    }
}
