mod common;

use common::rel;
use growthlab::verify::uniform_grid;
use growthlab::*;

fn canonical() -> (EconomyParams, f64) {
    let p = EconomyParams::canonical();
    let zs = steady_state(&p).unwrap().z_star;
    (p, zs)
}

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn z_star_pinnings_reduce_to_the_balanced_path() {
    let (p, zs) = canonical();
    let bgp = pin_bgp(&p, 1.0).unwrap();
    let one = pin_one_integral(&p, 1.0, zs, &quad()).unwrap();
    let two = pin_two_integral(&p, 1.0, zs, ConsumptionChoice::Transversality, &quad()).unwrap();
    for fam in [&one, &two] {
        let (a, b) = (fam.pinned(), bgp.pinned());
        assert!(rel(a.c0, b.c0) < 1e-10);
        assert!(rel(a.u0, b.u0) < 1e-10);
        assert!(rel(a.h0, b.h0) < 1e-10);
        assert!(rel(a.c1, b.c1) < 1e-10);
        for t in [1.0, 10.0, 50.0] {
            let (x, y) = (fam.eval(t).unwrap(), bgp.eval(t).unwrap());
            for v in Variable::ALL {
                assert!(rel(x.get(v), y.get(v)) < 1e-9, "{:?} {} at t={t}", fam.family(), v.name());
            }
        }
    }
}

#[test]
fn one_integral_u0_is_analytic_at_z_star() {
    let (p, zs) = canonical();
    let one = pin_one_integral(&p, 1.0, zs, &quad()).unwrap();
    let a = p.z_rate();
    let u0 = a * p.g_decay() / (p.delta * a);
    assert!(rel(one.pinned().u0, u0) < 1e-10);
    assert!(rel(u0, steady_state(&p).unwrap().u_star) < 1e-14);
}

#[test]
fn canonical_pinnings_are_concrete_and_consistent() {
    let (p, zs) = canonical();
    let z0 = 0.5 * zs;
    for fam in [
        pin_one_integral(&p, 1.0, z0, &quad()).unwrap(),
        pin_two_integral(&p, 1.0, z0, ConsumptionChoice::Transversality, &quad()).unwrap(),
    ] {
        let pin = fam.pinned();
        let f_inf = pin.f_inf.unwrap();
        assert!(rel(pin.c0, pin.k0 * z0.powf(p.z_power()) / f_inf) < 1e-15);
        assert!(rel(pin.h0 * pin.u0 / pin.k0, z0) < 1e-15);
        let c1 = (1.0 - p.beta) * p.gamma / p.delta * pin.c0.powf(-p.sigma) * z0.powf(-p.beta);
        assert!(rel(pin.c1, c1) < 1e-14);
        // The block consistency equation holds with the pinned values.
        let lhs = p.gamma * (1.0 - p.beta) * (p.rho - p.delta + p.delta * p.sigma) / p.delta;
        let bracket = p.sigma * pin.c0 * z0.powf(p.beta - 1.0)
            - (p.rho + p.pi - p.pi * p.sigma) * pin.k0 * z0.powf(p.beta - 1.0)
            + p.beta * p.gamma * (1.0 - p.sigma) * pin.k0;
        assert!(rel(pin.u0 / pin.k0 * bracket, lhs) < 1e-9);
    }
}

#[test]
fn closed_forms_match_the_numeric_oracle() {
    let (p, zs) = canonical();
    let opts = IntegratorOptions::with_tol(1e-12);
    for fam in [
        pin_one_integral(&p, 1.0, 0.5 * zs, &quad()).unwrap(),
        pin_two_integral(&p, 1.0, 0.5 * zs, ConsumptionChoice::Transversality, &quad()).unwrap(),
        pin_one_integral(&p, 3.0, 1.6 * zs, &quad()).unwrap(),
    ] {
        let start = fam.eval(0.0).unwrap().primal();
        let tr = integrate_grid(&p, &start, &[1.0, 5.0, 20.0], &opts).unwrap();
        for num in &tr.points {
            let exact = fam.eval(num.t).unwrap();
            for v in [Variable::C, Variable::K, Variable::H, Variable::Lambda, Variable::Mu] {
                assert!(rel(num.get(v), exact.get(v)) < 1e-7, "{} at {}", v.name(), num.t);
            }
            assert!((num.u - exact.u).abs() < 1e-7);
        }
    }
}

#[test]
fn definitional_identities_hold_along_every_family() {
    let (p, zs) = canonical();
    let fams = [
        pin_bgp(&p, 1.0).unwrap(),
        pin_one_integral(&p, 1.0, 0.5 * zs, &quad()).unwrap(),
        pin_two_integral(&p, 1.0, 0.5 * zs, ConsumptionChoice::Transversality, &quad()).unwrap(),
    ];
    for fam in &fams {
        let c1 = fam.pinned().c1;
        for t in uniform_grid(100.0, 51) {
            let s = fam.eval(t).unwrap();
            assert!(rel(s.lambda * s.c.powf(p.sigma), 1.0) < 1e-10);
            assert!(rel(s.mu, c1 * ((p.rho - p.delta) * t).exp()) < 1e-13);
            assert!(rel(s.h * s.u / s.k, s.z) < 1e-8);
            assert!(rel(s.z, fam.path().z_at(t).unwrap()) < 1e-15);
        }
    }
}

#[test]
fn initial_time_reproduces_the_pinned_values() {
    let (p, zs) = canonical();
    for fam in [
        pin_one_integral(&p, 2.0, 0.7 * zs, &quad()).unwrap(),
        pin_two_integral(&p, 2.0, 0.7 * zs, ConsumptionChoice::Transversality, &quad()).unwrap(),
    ] {
        let s = fam.eval(0.0).unwrap();
        let pin = fam.pinned();
        assert!(rel(s.c, pin.c0) < 1e-14);
        assert!(rel(s.k, pin.k0) < 1e-14);
        assert!(rel(s.h, pin.h0) < 1e-12);
        assert!(rel(s.u, pin.u0) < 1e-12);
    }
}

#[test]
fn labour_share_converges_to_its_steady_value() {
    let (p, zs) = canonical();
    let u_star = steady_state(&p).unwrap().u_star;
    let t = 200.0 / p.growth_rate();
    for ratio in [0.5, 1.5] {
        let one = pin_one_integral(&p, 1.0, ratio * zs, &quad()).unwrap();
        let two = pin_two_integral(&p, 1.0, ratio * zs, ConsumptionChoice::Transversality, &quad()).unwrap();
        assert!((one.eval(t).unwrap().u - u_star).abs() < 1e-4);
        assert!((two.eval(t).unwrap().u - u_star).abs() < 1e-4);
    }
}

#[test]
fn shared_components_of_the_two_families_coincide() {
    let (p, zs) = canonical();
    let one = pin_one_integral(&p, 1.0, 0.5 * zs, &quad()).unwrap();
    let two = pin_two_integral(&p, 1.0, 0.5 * zs, ConsumptionChoice::Transversality, &quad()).unwrap();
    for t in uniform_grid(60.0, 31) {
        let (a, b) = (one.eval(t).unwrap(), two.eval(t).unwrap());
        for v in [Variable::C, Variable::K, Variable::Lambda, Variable::Mu] {
            assert!(rel(a.get(v), b.get(v)) <= 1e-8);
        }
    }
}

#[test]
fn the_two_u0_values_coincide() {
    // The consistency equation of the two-integral family and the limit
    // condition of the one-integral family give the same labour share.
    for (p, ratio) in common::admissible_sample(11, 25) {
        let zs = steady_state(&p).unwrap().z_star;
        let one = pin_one_integral(&p, 1.0, ratio * zs, &quad()).unwrap();
        let two = pin_two_integral(&p, 1.0, ratio * zs, ConsumptionChoice::Transversality, &quad()).unwrap();
        assert!(rel(two.pinned().u0, one.pinned().u0) < 1e-8, "{p:?} ratio {ratio}");
    }
}

#[test]
fn override_reports_the_distance_to_the_transversality_value() {
    let (p, zs) = canonical();
    let base = pin_two_integral(&p, 1.0, 0.5 * zs, ConsumptionChoice::Transversality, &quad()).unwrap();
    let c0 = base.pinned().c0;
    let fam = pin_two_integral(&p, 1.0, 0.5 * zs, ConsumptionChoice::Override(1.1 * c0), &quad()).unwrap();
    assert_eq!(fam.pinned().c0, c0);
    assert!((fam.pinned().c0_adjustment.unwrap() - 0.1).abs() < 1e-12);
}

#[test]
fn scenario_one_variant_with_zero_constant_is_the_balanced_path() {
    let (p, _) = canonical();
    let bgp = pin_bgp(&p, 1.0).unwrap();
    for t in [0.0, 3.0, 30.0] {
        let a = eval_scenario_one_via_i1(&bgp, t, 0.0).unwrap();
        let b = eval_bgp(&bgp, t).unwrap();
        assert!(rel(a.u, b.u) < 1e-15);
        assert!(rel(a.h, b.h) < 1e-14);
        assert_eq!(a.c, b.c);
    }
}
