//! Closed-form solution families of the Lucas–Uzawa two-sector growth model.
//!
//! * [`params`]: structural parameters, admissibility, steady state.
//! * [`zpath`]: the ratio z = hu/k and the weighted integrals F and G.
//! * [`closed_form`]: pinning and evaluation of the three families.
//! * [`dynamics`]: the optimality system as an ODE and its numerical solution.
//! * [`verify`]: first integrals, residuals, transversality and convergence checks.

pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod ode;
pub mod params;
pub mod quadrature;
pub mod state;
pub mod verify;
pub mod zpath;

pub use closed_form::{
    eval_bgp, eval_one_integral, eval_scenario_one_via_i1, eval_two_integral, pin, pin_bgp, pin_one_integral,
    pin_two_integral, ConsumptionChoice, PinnedInitials, ScenarioOneVariant, SolutionFamily,
};
pub use dynamics::{integrate, integrate_grid, rhs_costate, rhs_primal, Provenance, Trajectory};
pub use error::{ClosedFormError, Error, IntegratorError, ParamError, QuadratureError, VerifyError, ZPathError};
pub use ode::IntegratorOptions;
pub use params::{
    is_on_restricted_manifold, restricted_sigma, steady_state, validate_params, Admissibility, EconomyParams,
    Family, FamilyAdmissibility, SteadyState,
};
pub use quadrature::{QuadratureConfig, QuadratureResult};
pub use state::{CostateState, PrimalState, StatePoint, StateSource, Variable};
pub use zpath::ZPath;
