//! End-to-end acceptance criteria at canonical parameters. Prints one line per
//! criterion and exits non-zero if any fails.

use std::time::{Duration, Instant};

use growthlab::verify::*;
use growthlab::*;
use growthlab_tests::{admissible_sample, canonical, rel};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome, Error> {
    Ok(Outcome { pass, detail })
}

fn timed(limit: Duration, f: impl FnOnce() -> Result<Outcome, Error>) -> Result<Outcome, Error> {
    let start = Instant::now();
    let mut o = f()?;
    let elapsed = start.elapsed();
    o.pass &= elapsed < limit;
    o.detail.push_str(&format!("; runtime {:.3}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs_f64()));
    Ok(o)
}

fn balanced_path_exactness() -> Result<Outcome, Error> {
    timed(Duration::from_secs(1), || {
        let (p, k0, _) = canonical();
        let fam = pin_bgp(&p, k0)?;
        let grid = uniform_grid(50.0, 101);
        let res = residuals(&fam, &grid, &ResidualOptions::default())?;
        let tr = integrate_grid(&p, &fam.eval(0.0)?.primal(), &grid, &IntegratorOptions::with_tol(1e-10))?;
        let mut worst = 0.0f64;
        for num in &tr.points {
            let exact = fam.eval(num.t)?;
            for v in Variable::ALL {
                worst = worst.max(rel(num.get(v), exact.get(v)));
            }
        }
        outcome(
            res.max <= 1e-8 && worst <= 1e-8,
            format!("max residual {:.3e} (<= 1e-8), oracle max relative gap {:.3e} (<= 1e-8)", res.max, worst),
        )
    })
}

fn first_integral_conservation() -> Result<Outcome, Error> {
    timed(Duration::from_secs(1), || {
        let (p, k0, z0) = canonical();
        let fam = pin_one_integral(&p, k0, z0, &QuadratureConfig::default())?;
        let grid = uniform_grid(30.0, 61);
        let tr = integrate_grid(&p, &fam.eval(0.0)?.primal(), &grid, &IntegratorOptions::with_tol(1e-10))?;
        let d = integral_drift(&tr, &grid)?;
        outcome(d.i1 <= 1e-7 && d.i2 <= 1e-7, format!("I1 drift {:.3e}, I2 drift {:.3e} (<= 1e-7)", d.i1, d.i2))
    })
}

fn closed_forms_match_oracle() -> Result<Outcome, Error> {
    timed(Duration::from_secs(10), || {
        let (p, k0, z0) = canonical();
        let q = QuadratureConfig::default();
        let fams = [pin_two_integral(&p, k0, z0, ConsumptionChoice::Transversality, &q)?, pin_one_integral(&p, k0, z0, &q)?];
        let mut parts = Vec::new();
        let mut pass = true;
        for fam in &fams {
            let o = compare_with_oracle(fam, &uniform_grid(20.0, 41), &IntegratorOptions::with_tol(1e-12))?;
            pass &= o.max_rel <= 1e-6 && o.max_abs_u <= 1e-6;
            parts.push(format!("{}: relative {:.3e}, u absolute {:.3e}", fam.family(), o.max_rel, o.max_abs_u));
        }
        outcome(pass, format!("{} (<= 1e-6)", parts.join("; ")))
    })
}

fn family_comparison() -> Result<Outcome, Error> {
    let (p, k0, z0) = canonical();
    let t_end = 200.0 / p.growth_rate();
    let cmp = compare_families(&p, k0, z0, &uniform_grid(50.0, 101), 1.0, t_end, &QuadratureConfig::default())?;
    let shared = cmp.max_rel_c.max(cmp.max_rel_k).max(cmp.max_rel_lambda).max(cmp.max_rel_mu);
    let differ = cmp.u_gap_at_probe > 1e-6 && cmp.h_gap_at_probe > 1e-6;
    let limit_two = (cmp.u_terminal_two - cmp.u_star).abs();
    let limit_one = (cmp.u_terminal_one - cmp.u_star).abs();
    let limits = limit_two < 1e-4 && limit_one < 1e-4;
    outcome(
        shared <= 1e-8 && differ && limits,
        format!(
            "shared c,k,lambda,mu gap {:.3e} (<= 1e-8) [{}]; u gap at t=1 {:.3e}, h gap {:.3e} (> 1e-6) [{}]; \
             |u(T)-u*| {:.3e} / {:.3e} at T={:.0} (< 1e-4) [{}]",
            shared,
            ok(shared <= 1e-8),
            cmp.u_gap_at_probe,
            cmp.h_gap_at_probe,
            ok(differ),
            limit_two,
            limit_one,
            t_end,
            ok(limits)
        ),
    )
}

fn transversality() -> Result<Outcome, Error> {
    let (p, k0, z0) = canonical();
    let q = QuadratureConfig::default();
    let cps = [10.0, 20.0, 40.0, 80.0];
    let bgp = pin_bgp(&p, k0)?;
    let fams = [
        bgp.clone(),
        pin_two_integral(&p, k0, z0, ConsumptionChoice::Transversality, &q)?,
        pin_one_integral(&p, k0, z0, &q)?,
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for fam in &fams {
        let r = check_transversality(fam, &cps, TRANSVERSALITY_EPSILON)?;
        let dec = r.lambda_k.strictly_decreasing && r.mu_h.strictly_decreasing;
        pass &= dec && r.pass;
        parts.push(format!("{} decreasing={}", fam.family(), dec));
    }
    let variant = check_transversality(&ScenarioOneVariant { family: &bgp, a2: 0.5 }, &cps, TRANSVERSALITY_EPSILON)?;
    pass &= !variant.mu_h.pass;
    parts.push(format!(
        "variant a2=0.5 mu*h final/initial {:.3e} flagged={}",
        variant.mu_h.final_relative, !variant.mu_h.pass
    ));
    outcome(pass, parts.join("; "))
}

fn quadrature_correctness() -> Result<Outcome, Error> {
    let (p, _, _) = canonical();
    let cfg = QuadratureConfig::default();
    let zs = steady_state(&p).unwrap().z_star;
    let path = ZPath::new(&p, zs)?;
    let q = p.z_power();
    let mut worst = 0.0f64;
    for t in [0.5, 5.0, 50.0] {
        let f = zs.powf(q) * (1.0 - (-p.f_decay() * t).exp()) / p.f_decay();
        let g = zs.powf(q) * (1.0 - (-p.g_decay() * t).exp()) / p.g_decay();
        worst = worst.max(rel(path.f(t, &cfg)?.value, f)).max(rel(path.g(t, &cfg)?.value, g));
    }
    let moving = ZPath::new(&p, 0.5 * zs)?;
    let base = moving.scaled_tail(p.f_decay(), 0.0, &cfg)?;
    let doubled = moving.scaled_tail_with_horizon(p.f_decay(), 0.0, 2.0 * base.horizon, &cfg)?;
    let stability = rel(doubled.result.value, base.result.value);
    let sample = admissible_sample(2024, 100);
    let mut ordered = 0;
    for (sp, ratio) in &sample {
        let path = ZPath::new(sp, ratio * steady_state(sp).unwrap().z_star)?;
        if path.g_infinity(&cfg)?.value > path.f_infinity(&cfg)?.value {
            ordered += 1;
        }
    }
    outcome(
        worst <= 1e-10 && stability <= 1e-9 && ordered == sample.len(),
        format!(
            "constant-integrand error {:.3e} (<= 1e-10); tail doubling change {:.3e} (<= 1e-9); G_inf > F_inf on {}/{}",
            worst,
            stability,
            ordered,
            sample.len()
        ),
    )
}

fn asymptotic_growth_rates() -> Result<Outcome, Error> {
    let (p, k0, z0) = canonical();
    let q = QuadratureConfig::default();
    let t = 50.0 / p.growth_rate();
    let g = p.growth_rate();
    let mut pass = true;
    let mut parts = Vec::new();
    for fam in [
        pin_bgp(&p, k0)?,
        pin_two_integral(&p, k0, z0, ConsumptionChoice::Transversality, &q)?,
        pin_one_integral(&p, k0, z0, &q)?,
    ] {
        let s = log_slopes(&fam, t, 1e-4 * t.max(1.0))?;
        let stock = [s[0], s[1], s[2]].iter().map(|x| (x - g).abs()).fold(0.0, f64::max);
        let u = s[3].abs();
        let mu = (s[5] - (p.rho - p.delta)).abs();
        pass &= stock < 1e-4 && u < 1e-4 && mu <= 1e-8;
        parts.push(format!("{}: c,k,h {:.2e}, u {:.2e}, mu {:.2e}", fam.family(), stock, u, mu));
    }
    outcome(pass, format!("T={t:.0}; {}", parts.join("; ")))
}

fn restricted_sigma_detection() -> Result<Outcome, Error> {
    let hit = restricted_sigma(&EconomyParams::new(2.0, 0.05, 0.6, 1.0, 0.05, 0.3));
    let found = hit.map(|s| (s - 5.25).abs() < 1e-12).unwrap_or(false);
    let miss = restricted_sigma(&EconomyParams::canonical()).is_none();
    let beta = EconomyParams { sigma: 0.33, ..EconomyParams::canonical() };
    let one = EconomyParams { sigma: 1.0, ..EconomyParams::canonical() };
    let beta_err = matches!(validate_params(&beta), Err(ParamError::SigmaEqualsBeta { .. }));
    let one_err = matches!(validate_params(&one), Err(ParamError::SigmaOne));
    outcome(
        found && miss && beta_err && one_err,
        format!("sigma_r = {hit:?}; canonical -> none: {miss}; sigma=beta rejected: {beta_err}; sigma=1 rejected: {one_err}"),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome, Error>); 8] = [
        ("1 balanced-path exactness", balanced_path_exactness),
        ("2 first-integral conservation", first_integral_conservation),
        ("3 closed forms vs numeric oracle", closed_forms_match_oracle),
        ("4 family comparison", family_comparison),
        ("5 transversality", transversality),
        ("6 quadrature correctness", quadrature_correctness),
        ("7 asymptotic growth rates", asymptotic_growth_rates),
        ("8 restricted-sigma detection", restricted_sigma_detection),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("criterion {name}: {} | {detail}", if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
