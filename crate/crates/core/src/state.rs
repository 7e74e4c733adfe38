use serde::Serialize;

use crate::error::{Error, ParamError};
use crate::params::EconomyParams;

/// (c, k, h, u): consumption, physical capital, human capital, labour share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimalState {
    pub c: f64,
    pub k: f64,
    pub h: f64,
    pub u: f64,
}

/// (k, h, λ, μ): the two stocks and their shadow prices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostateState {
    pub k: f64,
    pub h: f64,
    pub lambda: f64,
    pub mu: f64,
}

fn positive(name: &'static str, v: f64) -> Result<(), ParamError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ParamError::InvalidInitial { name, value: v })
    }
}

impl PrimalState {
    pub fn z(&self) -> f64 {
        self.h * self.u / self.k
    }

    pub fn check_positive(&self) -> Result<(), ParamError> {
        positive("c", self.c)?;
        positive("k", self.k)?;
        positive("h", self.h)?;
        positive("u", self.u)
    }

    /// λ = c^(−σ); μ from the interior optimality condition for u.
    pub fn to_costate(&self, p: &EconomyParams) -> CostateState {
        let lambda = self.c.powf(-p.sigma);
        let mu = p.gamma * (1.0 - p.beta) * lambda * self.z().powf(-p.beta) / p.delta;
        CostateState { k: self.k, h: self.h, lambda, mu }
    }
}

impl CostateState {
    pub fn check_positive(&self) -> Result<(), ParamError> {
        positive("k", self.k)?;
        positive("h", self.h)?;
        positive("lambda", self.lambda)?;
        positive("mu", self.mu)
    }

    /// Labour share solving u^β = γ(1−β) k^β h^(−β) λ / (δ μ).
    pub fn labour_share(&self, p: &EconomyParams) -> f64 {
        let rhs = p.gamma * (1.0 - p.beta) * (self.k / self.h).powf(p.beta) * self.lambda / (p.delta * self.mu);
        rhs.powf(1.0 / p.beta)
    }

    pub fn to_primal(&self, p: &EconomyParams) -> PrimalState {
        PrimalState {
            c: self.lambda.powf(-1.0 / p.sigma),
            k: self.k,
            h: self.h,
            u: self.labour_share(p),
        }
    }
}

/// Every model variable at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatePoint {
    pub t: f64,
    pub c: f64,
    pub k: f64,
    pub h: f64,
    pub u: f64,
    pub z: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl StatePoint {
    pub fn from_primal(p: &EconomyParams, t: f64, s: &PrimalState) -> Self {
        let co = s.to_costate(p);
        Self { t, c: s.c, k: s.k, h: s.h, u: s.u, z: s.z(), lambda: co.lambda, mu: co.mu }
    }

    pub fn primal(&self) -> PrimalState {
        PrimalState { c: self.c, k: self.k, h: self.h, u: self.u }
    }

    pub fn costate(&self) -> CostateState {
        CostateState { k: self.k, h: self.h, lambda: self.lambda, mu: self.mu }
    }

    /// Named access used by reports and CSV emitters.
    pub fn get(&self, var: Variable) -> f64 {
        match var {
            Variable::C => self.c,
            Variable::K => self.k,
            Variable::H => self.h,
            Variable::U => self.u,
            Variable::Z => self.z,
            Variable::Lambda => self.lambda,
            Variable::Mu => self.mu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    C,
    K,
    H,
    U,
    Z,
    Lambda,
    Mu,
}

impl Variable {
    pub const ALL: [Variable; 7] =
        [Variable::C, Variable::K, Variable::H, Variable::U, Variable::Z, Variable::Lambda, Variable::Mu];

    pub fn name(&self) -> &'static str {
        match self {
            Variable::C => "c",
            Variable::K => "k",
            Variable::H => "h",
            Variable::U => "u",
            Variable::Z => "z",
            Variable::Lambda => "lambda",
            Variable::Mu => "mu",
        }
    }
}

/// Anything that yields the full state at a requested time: closed-form
/// families, perturbed variants of them, and integrated trajectories.
pub trait StateSource {
    fn params(&self) -> &EconomyParams;
    fn state_at(&self, t: f64) -> Result<StatePoint, Error>;
}
