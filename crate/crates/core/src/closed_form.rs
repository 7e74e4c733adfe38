//! Pinning of family-consistent initial conditions and evaluation of the
//! three closed-form solution families.
//!
//! The user picks `k0` (and `z0` for the z ≠ z* families). Transversality
//! then fixes consumption through `lim F = k0 / (c0 z0^((β−σ)/σ))`, and each
//! family fixes u0 through its own condition: the balanced path puts u0 = u*,
//! the two-integral family solves the I2 = 0 consistency equation, and the
//! one-integral family uses the limit of G.
//!
//! Every occurrence of `K − F(t)` and `(A+δu0)K − δu0·G(t)` is evaluated as
//! `(K − F∞) + ∫ₜ^∞` with the pinned gap kept exactly zero, and the common
//! factor `e^(−ηt)` is divided out of numerators and denominators. The
//! remaining formulas are the published ones.

use serde::Serialize;

use crate::error::{ClosedFormError, Error, ParamError};
use crate::params::{steady_state, validate_params, EconomyParams, Family, SteadyState};
use crate::quadrature::QuadratureConfig;
use crate::state::{StatePoint, StateSource};
use crate::zpath::ZPath;

/// Initial conditions and integration constants of a pinned family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PinnedInitials {
    pub family: Family,
    pub k0: f64,
    pub z0: f64,
    pub c0: f64,
    pub u0: f64,
    pub h0: f64,
    /// Value of the first integral I1 (the constant c1).
    pub c1: f64,
    pub f_inf: Option<f64>,
    pub g_inf: Option<f64>,
    /// Relative distance between a user-supplied c0 and the transversality value.
    pub c0_adjustment: Option<f64>,
}

/// How the two-integral family obtains c0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConsumptionChoice {
    /// c0 = k0 z0^((σ−β)/σ) / F∞.
    Transversality,
    /// The supplied c0 is replaced by the transversality value; the distance is recorded.
    Override(f64),
    /// The supplied c0 is used as is. The resulting path is off the saddle
    /// path unless c0 happens to equal the transversality value.
    Keep(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionFamily {
    params: EconomyParams,
    steady: SteadyState,
    pinned: PinnedInitials,
    #[serde(skip)]
    path: ZPath,
    #[serde(skip)]
    quad: QuadratureConfig,
    /// K − F∞ with K = k0/(c0 z0^((β−σ)/σ)); zero when c0 is pinned.
    k_gap: f64,
    /// (A+δu0)K − δu0 G∞; zero when u0 is pinned by the G limit.
    g_gap: f64,
    /// σc0 z0^(β−1) − (ρ+π−πσ)k0 z0^(β−1) + βγ(1−σ)k0.
    consistency_bracket: f64,
}

fn require(p: &EconomyParams, family: Family) -> Result<(), ParamError> {
    let adm = validate_params(p)?;
    let fa = adm.get(family);
    if fa.satisfied {
        Ok(())
    } else {
        Err(ParamError::NotAdmissible {
            family,
            violated: fa.violated_constraints.iter().map(|c| c.name).collect(),
        })
    }
}

fn positive(name: &'static str, v: f64) -> Result<(), ParamError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ParamError::InvalidInitial { name, value: v })
    }
}

/// c1 = ((1−β)γ/δ) c0^(−σ) z0^(−β).
fn first_integral_constant(p: &EconomyParams, c0: f64, z0: f64) -> f64 {
    (1.0 - p.beta) * p.gamma / p.delta * c0.powf(-p.sigma) * z0.powf(-p.beta)
}

/// Balanced growth path: z = z* and every stock grows at (δ−ρ)/σ.
pub fn pin_bgp(p: &EconomyParams, k0: f64) -> Result<SolutionFamily, ClosedFormError> {
    require(p, Family::Bgp)?;
    positive("k0", k0)?;
    let steady = steady_state(p)?;
    let z0 = steady.z_star;
    let c0 = k0 * p.f_decay();
    let u0 = steady.u_star;
    let h0 = z0 * k0 / u0;
    let pinned = PinnedInitials {
        family: Family::Bgp,
        k0,
        z0,
        c0,
        u0,
        h0,
        c1: first_integral_constant(p, c0, z0),
        f_inf: None,
        g_inf: None,
        c0_adjustment: None,
    };
    Ok(SolutionFamily {
        params: *p,
        steady,
        pinned,
        path: ZPath::new(p, z0)?,
        quad: QuadratureConfig::default(),
        k_gap: 0.0,
        g_gap: 0.0,
        consistency_bracket: f64::NAN,
    })
}

fn transversal_consumption(path: &ZPath, k0: f64, f_inf: f64) -> f64 {
    k0 * path.z0().powf(path.z_power()) / f_inf
}

/// The z ≠ z* family obtained from both first integrals.
pub fn pin_two_integral(
    p: &EconomyParams,
    k0: f64,
    z0: f64,
    c0: ConsumptionChoice,
    quad: &QuadratureConfig,
) -> Result<SolutionFamily, ClosedFormError> {
    require(p, Family::TwoIntegral)?;
    positive("k0", k0)?;
    positive("z0", z0)?;
    let steady = steady_state(p)?;
    let path = ZPath::new(p, z0)?;
    let f_inf = path.f_infinity(quad)?.value;
    let c0_star = transversal_consumption(&path, k0, f_inf);

    let (c0, adjustment, k_gap) = match c0 {
        ConsumptionChoice::Transversality => (c0_star, None, 0.0),
        ConsumptionChoice::Override(given) => {
            positive("c0", given)?;
            (c0_star, Some((given - c0_star).abs() / c0_star), 0.0)
        }
        ConsumptionChoice::Keep(given) => {
            positive("c0", given)?;
            let k = k0 / (given * z0.powf(-path.z_power()));
            (given, Some((given - c0_star).abs() / c0_star), k - f_inf)
        }
    };

    let zb = z0.powf(p.beta - 1.0);
    let terms = [
        p.sigma * c0 * zb,
        -(p.rho + p.pi - p.pi * p.sigma) * k0 * zb,
        p.beta * p.gamma * (1.0 - p.sigma) * k0,
    ];
    let bracket: f64 = terms.iter().sum();
    let scale = terms.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if !(bracket.abs() > 1e-12 * scale) {
        return Err(ClosedFormError::SingularBracket { value: bracket });
    }
    let r = p.rho - p.delta + p.delta * p.sigma;
    let u0 = p.gamma * (1.0 - p.beta) * r / p.delta * k0 / bracket;
    if !(u0 > 0.0) {
        return Err(ClosedFormError::NegativeU0 { value: u0 });
    }
    let h0 = z0 * k0 / u0;
    let pinned = PinnedInitials {
        family: Family::TwoIntegral,
        k0,
        z0,
        c0,
        u0,
        h0,
        c1: first_integral_constant(p, c0, z0),
        f_inf: Some(f_inf),
        g_inf: None,
        c0_adjustment: adjustment,
    };
    Ok(SolutionFamily {
        params: *p,
        steady,
        pinned,
        path,
        quad: *quad,
        k_gap,
        g_gap: 0.0,
        consistency_bracket: bracket,
    })
}

/// The z ≠ z* family obtained from I1 alone.
pub fn pin_one_integral(
    p: &EconomyParams,
    k0: f64,
    z0: f64,
    quad: &QuadratureConfig,
) -> Result<SolutionFamily, ClosedFormError> {
    require(p, Family::OneIntegral)?;
    positive("k0", k0)?;
    positive("z0", z0)?;
    let steady = steady_state(p)?;
    let path = ZPath::new(p, z0)?;
    let f_inf = path.f_infinity(quad)?.value;
    let g_inf = path.g_infinity(quad)?.value;
    if !(g_inf > f_inf) {
        return Err(ClosedFormError::DegenerateLimits { f_inf, g_inf });
    }
    let c0 = transversal_consumption(&path, k0, f_inf);
    let a = p.z_rate();
    let u0 = a * f_inf / (p.delta * (g_inf - f_inf));
    let h0 = z0 * k0 / u0;
    let pinned = PinnedInitials {
        family: Family::OneIntegral,
        k0,
        z0,
        c0,
        u0,
        h0,
        c1: first_integral_constant(p, c0, z0),
        f_inf: Some(f_inf),
        g_inf: Some(g_inf),
        c0_adjustment: None,
    };
    Ok(SolutionFamily {
        params: *p,
        steady,
        pinned,
        path,
        quad: *quad,
        k_gap: 0.0,
        g_gap: 0.0,
        consistency_bracket: f64::NAN,
    })
}

/// Pins `family` from `(k0, z0)`; `z0` is ignored for the balanced path.
pub fn pin(
    p: &EconomyParams,
    family: Family,
    k0: f64,
    z0: f64,
    quad: &QuadratureConfig,
) -> Result<SolutionFamily, ClosedFormError> {
    match family {
        Family::Bgp => pin_bgp(p, k0),
        Family::TwoIntegral => pin_two_integral(p, k0, z0, ConsumptionChoice::Transversality, quad),
        Family::OneIntegral => pin_one_integral(p, k0, z0, quad),
    }
}

/// Quantities shared by the two z ≠ z* families at one instant.
struct Shared {
    z: f64,
    /// e^(ηt)·(K − F(t)).
    s: f64,
    /// c0·z0^(β/σ)·e^((δ−ρ)t/σ).
    cz_growth: f64,
    point: StatePoint,
}

impl SolutionFamily {
    pub fn family(&self) -> Family {
        self.pinned.family
    }

    pub fn params_ref(&self) -> &EconomyParams {
        &self.params
    }

    pub fn steady(&self) -> &SteadyState {
        &self.steady
    }

    pub fn pinned(&self) -> &PinnedInitials {
        &self.pinned
    }

    pub fn path(&self) -> &ZPath {
        &self.path
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    pub fn consistency_bracket(&self) -> Option<f64> {
        self.consistency_bracket.is_finite().then_some(self.consistency_bracket)
    }

    /// True when c0 (and u0 where applicable) satisfy the transversality limits.
    pub fn on_saddle_path(&self) -> bool {
        self.k_gap == 0.0 && self.g_gap == 0.0
    }

    pub fn eval(&self, t: f64) -> Result<StatePoint, ClosedFormError> {
        match self.pinned.family {
            Family::Bgp => eval_bgp(self, t),
            Family::TwoIntegral => eval_two_integral(self, t),
            Family::OneIntegral => eval_one_integral(self, t),
        }
    }

    fn costate_growth(&self, t: f64) -> f64 {
        ((self.params.rho - self.params.delta) * t).exp()
    }

    fn shared(&self, t: f64) -> Result<Shared, ClosedFormError> {
        let p = &self.params;
        let pin = &self.pinned;
        let z = self.path.z_at(t)?;
        let eta = p.f_decay();
        let tail = self.path.scaled_tail(eta, t, &self.quad)?.result.value;
        let s = if self.k_gap == 0.0 { tail } else { self.k_gap * (eta * t).exp() + tail };
        let cz_growth = pin.c0 * pin.z0.powf(p.beta / p.sigma) * (p.growth_rate() * t).exp();
        let c = cz_growth * z.powf(-p.beta / p.sigma);
        let k = s * cz_growth / z;
        let mu = pin.c1 * self.costate_growth(t);
        let lambda = pin.c1 * p.delta / ((1.0 - p.beta) * p.gamma) * self.costate_growth(t) * z.powf(p.beta);
        let point = StatePoint { t, c, k, h: f64::NAN, u: f64::NAN, z, lambda, mu };
        Ok(Shared { z, s, cz_growth, point })
    }
}

fn check_time(t: f64) -> Result<(), ClosedFormError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(crate::error::ZPathError::NegativeTime { t }.into())
    }
}

/// Pure exponentials at rate (δ−ρ)/σ for the stocks and ρ−δ for the prices.
pub fn eval_bgp(fam: &SolutionFamily, t: f64) -> Result<StatePoint, ClosedFormError> {
    check_time(t)?;
    let p = &fam.params;
    let pin = &fam.pinned;
    let grow = (p.growth_rate() * t).exp();
    let price = fam.costate_growth(t);
    Ok(StatePoint {
        t,
        c: pin.c0 * grow,
        k: pin.k0 * grow,
        h: pin.h0 * grow,
        u: fam.steady.u_star,
        z: fam.steady.z_star,
        lambda: pin.c0.powf(-p.sigma) * price,
        mu: pin.c1 * price,
    })
}

pub fn eval_two_integral(fam: &SolutionFamily, t: f64) -> Result<StatePoint, ClosedFormError> {
    check_time(t)?;
    let p = &fam.params;
    let pin = &fam.pinned;
    let sh = fam.shared(t)?;
    let b0 = fam.consistency_bracket;
    let pp = p.rho + p.pi - p.pi * p.sigma;
    let mixed = p.beta * p.gamma * (1.0 - p.sigma) - pp * sh.z.powf(p.beta - 1.0);
    let lead = p.sigma * sh.z.powf(p.beta - p.beta / p.sigma);
    let den = mixed * sh.s + lead;
    if !(den.is_finite() && den > 0.0) {
        return Err(ClosedFormError::DenominatorUnderflow { t });
    }
    let u = pin.u0 / pin.k0 * b0 * sh.s / den;
    let h = pin.h0 / (pin.z0 * b0) * sh.cz_growth * den;
    Ok(StatePoint { h, u, ..sh.point })
}

pub fn eval_one_integral(fam: &SolutionFamily, t: f64) -> Result<StatePoint, ClosedFormError> {
    check_time(t)?;
    let p = &fam.params;
    let pin = &fam.pinned;
    let sh = fam.shared(t)?;
    let a = p.z_rate();
    let gd = p.g_decay();
    let g_tail = fam.path.scaled_tail(gd, t, &fam.quad)?.result.value;
    let g_part = if fam.g_gap == 0.0 { 0.0 } else { fam.g_gap * (gd * t).exp() };
    let den = g_part + p.delta * pin.u0 * (g_tail - sh.s);
    if !(den.is_finite() && den > 0.0) {
        return Err(ClosedFormError::DenominatorUnderflow { t });
    }
    let u = a * pin.u0 * sh.s / den;
    let h = den * sh.cz_growth / (a * pin.u0);
    Ok(StatePoint { h, u, ..sh.point })
}

/// The balanced-path case rebuilt from I1 alone, where u solves
/// u̇/u = (δ−ρ−δσ)/σ + δu with free constant `a2`. `a2 = 0` is the
/// balanced path; any other value violates transversality for h.
#[derive(Debug, Clone)]
pub struct ScenarioOneVariant<'a> {
    pub family: &'a SolutionFamily,
    pub a2: f64,
}

pub fn eval_scenario_one_via_i1(fam: &SolutionFamily, t: f64, a2: f64) -> Result<StatePoint, ClosedFormError> {
    let base = eval_bgp(fam, t)?;
    let p = &fam.params;
    let n = (p.delta - p.rho - p.delta * p.sigma) / p.sigma;
    let den = a2 * n * (-n * t).exp() - p.delta;
    let u = n / den;
    let h = den / n * fam.steady.z_star * fam.pinned.k0 * (p.growth_rate() * t).exp();
    Ok(StatePoint { u, h, ..base })
}

impl StateSource for SolutionFamily {
    fn params(&self) -> &EconomyParams {
        &self.params
    }

    fn state_at(&self, t: f64) -> Result<StatePoint, Error> {
        Ok(self.eval(t)?)
    }
}

impl StateSource for ScenarioOneVariant<'_> {
    fn params(&self) -> &EconomyParams {
        &self.family.params
    }

    fn state_at(&self, t: f64) -> Result<StatePoint, Error> {
        Ok(eval_scenario_one_via_i1(self.family, t, self.a2)?)
    }
}
