mod common;

use common::rel;
use growthlab::verify::{integral_drift, uniform_grid};
use growthlab::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn primal_from_costate(p: &EconomyParams, s: &CostateState) -> PrimalState {
    s.to_primal(p)
}

#[test]
fn primal_rates_are_the_pushforward_of_costate_rates() {
    let p = EconomyParams::canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let prim = PrimalState {
            c: rng.gen_range(0.1..3.0),
            k: rng.gen_range(0.1..5.0),
            h: rng.gen_range(0.1..5.0),
            u: rng.gen_range(0.05..1.0),
        };
        let co = prim.to_costate(&p);
        let d = rhs_costate(&p, 0.0, &co).unwrap();
        // Directional derivative of the costate → primal map along the costate flow.
        let eps = 1e-6;
        let shifted = |s: f64| {
            primal_from_costate(
                &p,
                &CostateState {
                    k: co.k + s * d.k,
                    h: co.h + s * d.h,
                    lambda: co.lambda + s * d.lambda,
                    mu: co.mu + s * d.mu,
                },
            )
        };
        let (a, b) = (shifted(-eps), shifted(eps));
        let fd = [(b.c - a.c) / (2.0 * eps), (b.u - a.u) / (2.0 * eps)];
        let direct = rhs_primal(&p, 0.0, &prim).unwrap();
        assert!((fd[0] - direct.c).abs() <= 1e-7 * direct.c.abs().max(prim.c));
        assert!((fd[1] - direct.u).abs() <= 1e-7 * direct.u.abs().max(prim.u));
        assert!(rel(direct.k, d.k) < 1e-12 || (direct.k - d.k).abs() < 1e-14);
        assert!(rel(direct.h, d.h) < 1e-12 || (direct.h - d.h).abs() < 1e-14);
    }
}

#[test]
fn state_conversion_round_trips() {
    let p = EconomyParams::canonical();
    let prim = PrimalState { c: 0.7, k: 2.0, h: 1.3, u: 0.4 };
    let back = prim.to_costate(&p).to_primal(&p);
    assert!(rel(back.c, prim.c) < 1e-12);
    assert!(rel(back.u, prim.u) < 1e-12);
}

#[test]
fn balanced_path_is_reproduced_over_fifty_periods() {
    let p = EconomyParams::canonical();
    let fam = pin_bgp(&p, 1.0).unwrap();
    let tol = 1e-9;
    let grid = uniform_grid(50.0, 101);
    let tr = integrate_grid(&p, &fam.eval(0.0).unwrap().primal(), &grid, &IntegratorOptions::with_tol(tol)).unwrap();
    for num in &tr.points {
        let exact = fam.eval(num.t).unwrap();
        for v in Variable::ALL {
            assert!(rel(num.get(v), exact.get(v)) <= 10.0 * tol, "{} at {}", v.name(), num.t);
        }
    }
}

#[test]
fn two_integral_family_is_reproduced_over_twenty_periods() {
    let p = EconomyParams::canonical();
    let zs = steady_state(&p).unwrap().z_star;
    let fam = pin_two_integral(&p, 1.0, 0.5 * zs, ConsumptionChoice::Transversality, &QuadratureConfig::default()).unwrap();
    // Local errors grow like e^(ηt) off the saddle path, so 20 periods need tol ≤ 1e-10.
    for tol in [1e-10, 1e-12] {
        let tr = integrate_grid(&p, &fam.eval(0.0).unwrap().primal(), &uniform_grid(20.0, 41), &IntegratorOptions::with_tol(tol))
            .unwrap();
        let bound = (10.0 * tol).max(1e-7);
        for num in &tr.points {
            let exact = fam.eval(num.t).unwrap();
            for v in [Variable::C, Variable::K, Variable::H, Variable::Lambda, Variable::Mu] {
                assert!(rel(num.get(v), exact.get(v)) <= bound);
            }
            assert!((num.u - exact.u).abs() <= bound);
        }
    }
}

#[test]
fn first_integrals_are_conserved_by_the_integrator() {
    let p = EconomyParams::canonical();
    let tol = 1e-10;
    let saddle = pin_one_integral(&p, 1.0, 0.2, &QuadratureConfig::default()).unwrap().eval(0.0).unwrap().primal();
    // Off the saddle path as well as on it; the perturbed path blows up in
    // finite time, so it is followed over a shorter window.
    for (start, t_max) in [(PrimalState { c: 0.4, k: 1.0, h: 1.0, u: 0.5 }, 8.0), (saddle, 30.0)] {
        let grid = uniform_grid(t_max, 61);
        let tr = integrate_grid(&p, &start, &grid, &IntegratorOptions::with_tol(tol)).unwrap();
        let d = integral_drift(&tr, &grid).unwrap();
        assert!(d.i1 <= 100.0 * tol, "{d:?}");
        assert!(d.i2 <= 100.0 * tol, "{d:?}");
    }
}

#[test]
fn refining_the_output_grid_leaves_shared_values_unchanged() {
    let p = EconomyParams::canonical();
    let start = PrimalState { c: 0.4, k: 1.0, h: 1.0, u: 0.5 };
    let tol = 1e-10;
    let coarse = integrate_grid(&p, &start, &uniform_grid(10.0, 6), &IntegratorOptions::with_tol(tol)).unwrap();
    let fine = integrate_grid(&p, &start, &uniform_grid(10.0, 51), &IntegratorOptions::with_tol(tol)).unwrap();
    for a in &coarse.points {
        let b = fine.state_at(a.t).unwrap();
        for v in Variable::ALL {
            assert!(rel(a.get(v), b.get(v)) <= 10.0 * tol);
        }
    }
}

#[test]
fn labour_share_above_one_is_flagged_not_clamped() {
    let p = EconomyParams::canonical();
    // Consumption far below the saddle path drives u upward without bound.
    let start = PrimalState { c: 0.05, k: 1.0, h: 1.0, u: 0.9 };
    let tr = integrate(&p, &start, 4.0, &IntegratorOptions::default()).unwrap();
    let t = tr.u_excursion.expect("u exceeds one");
    assert!(t > 0.0 && t <= 4.0);
    assert!(tr.points.iter().any(|s| s.u > 1.0));
}

#[test]
fn invalid_requests_are_rejected() {
    let p = EconomyParams::canonical();
    let s = PrimalState { c: 0.4, k: 1.0, h: 1.0, u: 0.5 };
    assert!(integrate(&p, &s, 1.0, &IntegratorOptions::with_tol(1e-2)).is_err());
    assert!(integrate(&p, &s, -1.0, &IntegratorOptions::default()).is_err());
    assert!(integrate(&p, &PrimalState { c: 0.0, ..s }, 1.0, &IntegratorOptions::default()).is_err());
}
