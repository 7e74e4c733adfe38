//! The transition ratio z(t) = h·u/k and the weighted integrals F, G built on it.
//!
//! z follows a logistic law in z^(1−β), so it has an explicit form. The two
//! integrals
//!
//! ```text
//! F(t) = ∫₀ᵗ z(s)^q e^(−η s) ds,   G(t) = ∫₀ᵗ z(s)^q e^(−g s) ds,   q = (σ−β)/σ
//! ```
//!
//! with η = (δ+π−πβ)/β − (δ−ρ)/σ and g = (δσ−δ+ρ)/σ have no closed form for
//! z0 ≠ z* and are evaluated by adaptive quadrature. Their remainders
//! `∫ₜ^∞` are returned in scaled form, `e^(rate·t)·∫ₜ^∞`, which stays O(1)
//! for every t.

use serde::Serialize;

use crate::error::ZPathError;
use crate::params::{steady_state, EconomyParams};
use crate::quadrature::{integrate, QuadratureConfig, QuadratureResult};

/// Relative distance from z*^q below which the integrand is treated as having
/// reached its limit when truncating an improper integral.
const Z_SETTLED: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZPath {
    params: EconomyParams,
    z0: f64,
    z_star: f64,
    rate: f64,
    zs_pow: f64,
    z0_pow: f64,
    q: f64,
}

/// An improper integral evaluated as a finite quadrature plus an analytic tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailIntegral {
    pub result: QuadratureResult,
    /// Truncation point, measured from the lower limit of integration.
    pub horizon: f64,
    /// Analytic contribution of `[horizon, ∞)`.
    pub tail: f64,
}

impl ZPath {
    pub fn new(params: &EconomyParams, z0: f64) -> Result<Self, ZPathError> {
        let ss = steady_state(params)?;
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(crate::error::ParamError::InvalidInitial { name: "z0", value: z0 }.into());
        }
        let omb = 1.0 - params.beta;
        Ok(Self {
            params: *params,
            z0,
            z_star: ss.z_star,
            rate: params.z_rate(),
            zs_pow: ss.z_star.powf(omb),
            z0_pow: z0.powf(omb),
            q: params.z_power(),
        })
    }

    pub fn params(&self) -> &EconomyParams {
        &self.params
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn z_star(&self) -> f64 {
        self.z_star
    }

    /// Exponent q = (σ−β)/σ.
    pub fn z_power(&self) -> f64 {
        self.q
    }

    fn bracket(&self, t: f64) -> f64 {
        (self.zs_pow - self.z0_pow) * (-self.rate * t).exp() + self.z0_pow
    }

    fn z_raw(&self, t: f64) -> f64 {
        if t == 0.0 {
            return self.z0;
        }
        self.z_star * self.z0 / self.bracket(t).powf(1.0 / (1.0 - self.params.beta))
    }

    /// z(t) = z*·z0 / [(z*^(1−β) − z0^(1−β)) e^(−(1−β)(δ+π)t/β) + z0^(1−β)]^(1/(1−β)).
    pub fn z_at(&self, t: f64) -> Result<f64, ZPathError> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(ZPathError::NegativeTime { t });
        }
        let b = self.bracket(t);
        if !(b.is_finite() && b > 0.0) {
            return Err(ZPathError::DegenerateBracket { t, value: b });
        }
        Ok(self.z_raw(t))
    }

    /// z(s)^q · e^(−rate·(s − shift)), evaluated in log form.
    fn integrand(&self, s: f64, rate: f64, shift: f64) -> f64 {
        (self.q * self.z_raw(s).ln() - rate * (s - shift)).exp()
    }

    fn check_time(t: f64) -> Result<(), ZPathError> {
        if t.is_finite() && t >= 0.0 {
            Ok(())
        } else {
            Err(ZPathError::NegativeTime { t })
        }
    }

    /// ∫_{t0}^{t1} z(s)^q e^(−rate s) ds.
    pub fn weighted_integral(
        &self,
        rate: f64,
        t0: f64,
        t1: f64,
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult, ZPathError> {
        Self::check_time(t0)?;
        Self::check_time(t1)?;
        if t1 <= t0 {
            return Ok(QuadratureResult::ZERO);
        }
        // Past the truncation horizon the integrand is negligible; integrating
        // the two pieces separately keeps the initial Kronrod rule from
        // straddling the whole decay.
        let split = if rate > 0.0 { t0 + self.horizon(rate, t0, cfg.rel_tol) } else { t1 };
        let f = |s: f64| self.integrand(s, rate, 0.0);
        if split < t1 {
            let head = integrate(f, t0, split, cfg)?;
            let rest = integrate(f, split, t1, cfg)?;
            Ok(head.combine(rest))
        } else {
            Ok(integrate(f, t0, t1, cfg)?)
        }
    }

    /// F(t) = ∫₀ᵗ z^q e^(−η s) ds.
    pub fn f(&self, t: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult, ZPathError> {
        self.weighted_integral(self.params.f_decay(), 0.0, t, cfg)
    }

    /// G(t) = ∫₀ᵗ z^q e^(−(δσ−δ+ρ)s/σ) ds.
    pub fn g(&self, t: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult, ZPathError> {
        self.weighted_integral(self.params.g_decay(), 0.0, t, cfg)
    }

    /// Truncation point (relative to `t`) for `∫ₜ^∞ z^q e^(−rate s) ds`: late
    /// enough that both the exponential has decayed below `tol` and z^q sits
    /// within 1e−12 of z*^q.
    fn horizon(&self, rate: f64, t: f64, tol: f64) -> f64 {
        let h_exp = (1.0 / tol.max(f64::MIN_POSITIVE)).ln().max(1.0) / rate;
        let d = self.zs_pow / self.z0_pow - 1.0;
        let amp = (self.q / (1.0 - self.params.beta)).abs() * d.abs();
        let h_z = if amp > 0.0 { ((amp / Z_SETTLED).ln() / self.rate - t).max(0.0) } else { 0.0 };
        let mut h = h_exp.max(h_z);
        // The estimate above is first order in the deviation; confirm it.
        let limit = self.z_star.powf(self.q);
        for _ in 0..16 {
            let zq = self.z_raw(t + h).powf(self.q);
            if (zq - limit).abs() <= Z_SETTLED * limit {
                break;
            }
            h *= 2.0;
        }
        h
    }

    /// `e^(rate·t) ∫ₜ^∞ z(s)^q e^(−rate s) ds`, i.e. `∫₀^∞ z(t+s)^q e^(−rate s) ds`.
    pub fn scaled_tail(&self, rate: f64, t: f64, cfg: &QuadratureConfig) -> Result<TailIntegral, ZPathError> {
        Self::check_time(t)?;
        if !(rate > 0.0) {
            return Err(ZPathError::NonPositiveDecay { rate });
        }
        let h = self.horizon(rate, t, cfg.rel_tol);
        self.scaled_tail_with_horizon(rate, t, h, cfg)
    }

    /// As [`Self::scaled_tail`] with an explicit truncation point.
    pub fn scaled_tail_with_horizon(
        &self,
        rate: f64,
        t: f64,
        horizon: f64,
        cfg: &QuadratureConfig,
    ) -> Result<TailIntegral, ZPathError> {
        Self::check_time(t)?;
        if !(rate > 0.0) {
            return Err(ZPathError::NonPositiveDecay { rate });
        }
        let body = integrate(|s| self.integrand(s, rate, t), t, t + horizon, cfg)?;
        // z is monotone, so on [horizon, ∞) z^q lies between z(t+horizon)^q and z*^q.
        let decay = (-rate * horizon).exp() / rate;
        let z_end = self.z_raw(t + horizon).powf(self.q);
        let z_lim = self.z_star.powf(self.q);
        let lo = z_end.min(z_lim) * decay;
        let hi = z_end.max(z_lim) * decay;
        let tail = 0.5 * (lo + hi);
        let result = QuadratureResult {
            value: body.value + tail,
            abs_error_estimate: body.abs_error_estimate + 0.5 * (hi - lo),
            evaluations: body.evaluations,
        };
        Ok(TailIntegral { result, horizon, tail })
    }

    /// lim F(t) as t → ∞.
    pub fn f_infinity(&self, cfg: &QuadratureConfig) -> Result<QuadratureResult, ZPathError> {
        Ok(self.scaled_tail(self.params.f_decay(), 0.0, cfg)?.result)
    }

    /// lim G(t) as t → ∞.
    pub fn g_infinity(&self, cfg: &QuadratureConfig) -> Result<QuadratureResult, ZPathError> {
        Ok(self.scaled_tail(self.params.g_decay(), 0.0, cfg)?.result)
    }
}
