//! Structural parameters of the two-sector economy, admissibility checks for
//! each closed-form family, and steady-state quantities.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::ParamError;

/// Relative slack used when comparing the two sides of a strict inequality.
pub const DEFAULT_SLACK: f64 = 1e-12;

/// The six structural parameters.
///
/// `sigma` is the inverse elasticity of intertemporal substitution, `rho` the
/// discount rate, `beta` the output elasticity of physical capital, `gamma`
/// and `delta` the technology levels of the goods and education sectors, and
/// `pi` the depreciation rate of physical capital.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconomyParams {
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub pi: f64,
}

impl EconomyParams {
    pub const fn new(sigma: f64, rho: f64, beta: f64, gamma: f64, delta: f64, pi: f64) -> Self {
        Self { sigma, rho, beta, gamma, delta, pi }
    }

    /// σ=2, ρ=0.05, β=0.33, γ=1, δ=0.11, π=0.04.
    pub const fn canonical() -> Self {
        Self::new(2.0, 0.05, 0.33, 1.0, 0.11, 0.04)
    }

    fn fields(&self) -> [(&'static str, f64); 6] {
        [
            ("sigma", self.sigma),
            ("rho", self.rho),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("pi", self.pi),
        ]
    }

    /// Asymptotic growth rate (δ−ρ)/σ.
    pub fn growth_rate(&self) -> f64 {
        (self.delta - self.rho) / self.sigma
    }

    /// Convergence rate of z towards z*: (1−β)(δ+π)/β.
    pub fn z_rate(&self) -> f64 {
        (1.0 - self.beta) * (self.delta + self.pi) / self.beta
    }

    /// Decay rate of the F integrand: (δ+π−πβ)/β − (δ−ρ)/σ.
    pub fn f_decay(&self) -> f64 {
        (self.delta + self.pi - self.pi * self.beta) / self.beta - self.growth_rate()
    }

    /// Decay rate of the G integrand: (δσ−δ+ρ)/σ.
    pub fn g_decay(&self) -> f64 {
        (self.delta * self.sigma - self.delta + self.rho) / self.sigma
    }

    /// Exponent (σ−β)/σ carried by z in both quadrature integrands.
    pub fn z_power(&self) -> f64 {
        (self.sigma - self.beta) / self.sigma
    }

    /// Hard checks that make every formula in the crate well defined:
    /// finiteness, σ≠1, σ≠β, and the sign/range constraints on the rest.
    pub fn check(&self) -> Result<(), ParamError> {
        self.check_with_slack(DEFAULT_SLACK)
    }

    pub fn check_with_slack(&self, slack: f64) -> Result<(), ParamError> {
        self.check_exclusions(slack)?;
        for c in self.base_constraints(slack) {
            if !c.holds {
                return Err(ParamError::OutOfRange {
                    constraint: c.name,
                    lhs: c.lhs,
                    rhs: c.rhs,
                });
            }
        }
        Ok(())
    }

    fn check_exclusions(&self, slack: f64) -> Result<(), ParamError> {
        for (name, v) in self.fields() {
            if !v.is_finite() {
                return Err(ParamError::NonFinite { name, value: v });
            }
        }
        if near(self.sigma, 1.0, slack) {
            return Err(ParamError::SigmaOne);
        }
        if near(self.sigma, self.beta, slack) {
            return Err(ParamError::SigmaEqualsBeta { value: self.sigma });
        }
        Ok(())
    }

    fn base_constraints(&self, slack: f64) -> Vec<Constraint> {
        vec![
            Constraint::less("sigma_positive", 0.0, self.sigma, slack),
            Constraint::less("rho_positive", 0.0, self.rho, slack),
            Constraint::less("beta_positive", 0.0, self.beta, slack),
            Constraint::less("beta_below_one", self.beta, 1.0, slack),
            Constraint::less("gamma_positive", 0.0, self.gamma, slack),
            Constraint::less("delta_positive", 0.0, self.delta, slack),
            Constraint::less_eq("pi_nonnegative", 0.0, self.pi),
        ]
    }
}

impl Default for EconomyParams {
    fn default() -> Self {
        Self::canonical()
    }
}

fn near(a: f64, b: f64, slack: f64) -> bool {
    (a - b).abs() <= slack * a.abs().max(b.abs()).max(1.0)
}

/// One of the three closed-form solution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// z = z* from the start: every stock grows at g*.
    Bgp,
    /// z ≠ z*, built from both first integrals.
    TwoIntegral,
    /// z ≠ z*, built from the first integral I1 alone.
    OneIntegral,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Bgp, Family::TwoIntegral, Family::OneIntegral];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Bgp => "bgp",
            Family::TwoIntegral => "two-integral",
            Family::OneIntegral => "one-integral",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bgp" => Ok(Family::Bgp),
            "two-integral" => Ok(Family::TwoIntegral),
            "one-integral" => Ok(Family::OneIntegral),
            other => Err(format!(
                "unknown family `{other}` (expected bgp, two-integral or one-integral)"
            )),
        }
    }
}

/// A named inequality with both evaluated sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Constraint {
    /// `lhs < rhs`, where a gap smaller than the relative slack counts as a violation.
    fn less(name: &'static str, lhs: f64, rhs: f64, slack: f64) -> Self {
        let margin = slack * lhs.abs().max(rhs.abs());
        Self { name, lhs, rhs, holds: lhs < rhs - margin }
    }

    fn less_eq(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { name, lhs, rhs, holds: lhs <= rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyAdmissibility {
    pub family: Family,
    pub satisfied: bool,
    pub violated_constraints: Vec<Constraint>,
}

/// Result of [`validate_params`]: one entry per family plus economic diagnostics
/// that do not affect admissibility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub families: Vec<FamilyAdmissibility>,
    pub warnings: Vec<String>,
}

impl Admissibility {
    pub fn get(&self, family: Family) -> &FamilyAdmissibility {
        self.families
            .iter()
            .find(|f| f.family == family)
            .expect("every family is evaluated")
    }

    pub fn is_admissible(&self, family: Family) -> bool {
        self.get(family).satisfied
    }
}

pub fn validate_params(p: &EconomyParams) -> Result<Admissibility, ParamError> {
    validate_params_with_slack(p, DEFAULT_SLACK)
}

pub fn validate_params_with_slack(p: &EconomyParams, slack: f64) -> Result<Admissibility, ParamError> {
    p.check_exclusions(slack)?;

    let base = p.base_constraints(slack);
    let upper = Constraint::less("delta_below_rho_plus_delta_sigma", p.delta, p.rho + p.delta * p.sigma, slack);
    let lower = Constraint::less("rho_below_delta", p.rho, p.delta, slack);
    let eta = Constraint::less("f_decay_positive", 0.0, p.f_decay(), slack);
    // On the balanced path c0/k0 = (δ+π(1−β))/β − (δ−ρ)/σ.
    let bgp_ratio = Constraint::less("bgp_consumption_ratio_positive", 0.0, p.f_decay(), slack);

    let collect = |family: Family, extra: Vec<&Constraint>| {
        let violated: Vec<Constraint> = base
            .iter()
            .chain(extra)
            .filter(|c| !c.holds)
            .cloned()
            .collect();
        FamilyAdmissibility { family, satisfied: violated.is_empty(), violated_constraints: violated }
    };

    let families = vec![
        collect(Family::Bgp, vec![&upper, &bgp_ratio]),
        collect(Family::TwoIntegral, vec![&lower, &upper, &eta]),
        collect(Family::OneIntegral, vec![&lower, &upper, &eta]),
    ];

    let mut warnings = Vec::new();
    if base.iter().all(|c| c.holds) {
        let u_star = u_star(p);
        if u_star > 1.0 {
            warnings.push(format!(
                "u* = {u_star} exceeds 1; the labour share in goods production is outside [0, 1]"
            ));
        }
    }
    Ok(Admissibility { families, warnings })
}

/// Long-run quantities shared by all three families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyState {
    pub z_star: f64,
    pub u_star: f64,
    pub g_star: f64,
    pub eta: f64,
}

fn u_star(p: &EconomyParams) -> f64 {
    (p.rho - p.delta + p.delta * p.sigma) / (p.delta * p.sigma)
}

pub fn steady_state(p: &EconomyParams) -> Result<SteadyState, ParamError> {
    p.check()?;
    let z_star = (p.beta * p.gamma / (p.delta + p.pi)).powf(1.0 / (p.beta - 1.0));
    Ok(SteadyState {
        z_star,
        u_star: u_star(p),
        g_star: p.growth_rate(),
        eta: p.f_decay(),
    })
}

/// Denominator 2πβ − δ + δβ − π of the restricted σ.
pub fn restricted_sigma_denominator(p: &EconomyParams) -> f64 {
    2.0 * p.pi * p.beta - p.delta + p.delta * p.beta - p.pi
}

/// The σ = β(ρ+π)/(2πβ−δ+δβ−π) at which an additional first integral exists.
/// The current `p.sigma` is ignored; `None` when the denominator is not positive.
pub fn restricted_sigma(p: &EconomyParams) -> Option<f64> {
    let den = restricted_sigma_denominator(p);
    if den > 0.0 {
        Some(p.beta * (p.rho + p.pi) / den)
    } else {
        None
    }
}

pub fn is_on_restricted_manifold(p: &EconomyParams, rel_tol: f64) -> bool {
    match restricted_sigma(p) {
        Some(s) => (p.sigma - s).abs() <= rel_tol * s.abs(),
        None => false,
    }
}
