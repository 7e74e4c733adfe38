#![allow(dead_code)]

use growthlab::{validate_params, EconomyParams, Family};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson on [a, b] with Richardson correction.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// z(t) by classical RK4 on ż = z((δ+π)/β − γ z^(1−β)), the law implied by
/// the growth rates of h, u and k.
pub fn z_by_rk4(p: &EconomyParams, z0: f64, t: f64, steps: usize) -> f64 {
    let f = |z: f64| z * ((p.delta + p.pi) / p.beta - p.gamma * z.powf(1.0 - p.beta));
    let h = t / steps as f64;
    let mut z = z0;
    for _ in 0..steps {
        let k1 = f(z);
        let k2 = f(z + 0.5 * h * k1);
        let k3 = f(z + 0.5 * h * k2);
        let k4 = f(z + h * k3);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    z
}

/// Draws a parameter set uniformly from a box and keeps it if the z ≠ z*
/// families are admissible.
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
            let ratio = rng.gen_range(0.3..2.0);
            out.push((p, ratio));
        }
    }
    out
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
