//! Fixtures shared by the acceptance suite.

use growthlab::{steady_state, validate_params, EconomyParams, Family};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Canonical parameters with k0 = 1 and z0 = z*/2.
pub fn canonical() -> (EconomyParams, f64, f64) {
    let p = EconomyParams::canonical();
    let zs = steady_state(&p).expect("canonical parameters are valid").z_star;
    (p, 1.0, 0.5 * zs)
}

/// `n` parameter sets, drawn uniformly from a box with a fixed seed, for
/// which both z ≠ z* families are admissible; each comes with a z0/z* ratio.
pub fn admissible_sample(seed: u64, n: usize) -> Vec<(EconomyParams, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = EconomyParams {
            sigma: rng.gen_range(0.3..5.0),
            rho: rng.gen_range(0.005..0.1),
            beta: rng.gen_range(0.15..0.85),
            gamma: rng.gen_range(0.3..3.0),
            delta: rng.gen_range(0.01..0.3),
            pi: rng.gen_range(0.0..0.1),
        };
        let ok = validate_params(&p)
            .map(|a| a.is_admissible(Family::OneIntegral) && a.is_admissible(Family::TwoIntegral))
            .unwrap_or(false);
        if ok && (p.sigma - 1.0).abs() > 0.05 && (p.sigma - p.beta).abs() > 0.05 {
            out.push((p, rng.gen_range(0.3..2.0)));
        }
    }
    out
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
