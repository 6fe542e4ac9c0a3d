//! Acceptance suite. Each test prints one PASS/FAIL line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use bellman_constant::analysis;
use bellman_constant::constant::{bellman_t, Case, DomainPoint};
use bellman_constant::hardy;
use bellman_constant::kernel::{self, Exponents};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const PAIRS: [(f64, f64); 5] = [(2.0, 1.5), (3.0, 2.0), (2.5, 1.2), (4.0, 3.0), (1.8, 1.3)];

fn exps(p: f64, q: f64) -> Exponents {
    Exponents::new(p, q).unwrap()
}

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!("acceptance {id:2} [{name}]: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} [{name}] failed: {detail}");
}

#[test]
fn c01_inverse_round_trip() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (p, q) in PAIRS {
        for r in [p, q] {
            for i in 0..1000 {
                let s = i as f64 / 999.0;
                let w = kernel::omega(s, r).unwrap();
                worst = worst.max((kernel::h(w, r).unwrap() - s).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = worst <= 1e-12 && elapsed.as_secs_f64() < 5.0;
    report(
        1,
        "inverse-round-trip",
        ok,
        &format!("max residual {worst:.2e}, {:.2}s", elapsed.as_secs_f64()),
    );
}

#[test]
fn c02_critical_tau_fixed_point() {
    let mut worst: f64 = 0.0;
    for (p, q) in PAIRS {
        let e = exps(p, q);
        for i in 1..=100 {
            let s1 = i as f64 / 101.0;
            worst = worst.max(analysis::critical_tau_residual(s1, &e).unwrap());
        }
    }
    report(2, "critical-tau", worst <= 1e-9, &format!("max residual {worst:.2e}"));
}

#[test]
fn c03_critical_balance() {
    let mut worst: f64 = 0.0;
    for (p, q) in PAIRS {
        let e = exps(p, q);
        for i in 1..=100 {
            let s1 = i as f64 / 101.0;
            worst = worst.max(analysis::critical_balance_residual(s1, &e).unwrap());
        }
    }
    report(3, "critical-balance", worst <= 1e-8, &format!("max relative residual {worst:.2e}"));
}

#[test]
fn c04_a_and_f_monotone() {
    let grid: Vec<f64> = (0..100)
        .map(|i| 1e-4 + (1.0 - 2e-4) * i as f64 / 99.0)
        .collect();
    let mut violations = 0usize;
    for (p, q) in PAIRS {
        let e = exps(p, q);
        violations += analysis::a_increasing_violations(q, &grid).violations.len();
        violations += analysis::f_increasing_violations(&e, &grid).violations.len();
    }
    report(4, "a-f-monotone", violations == 0, &format!("{violations} violations"));
}

#[test]
fn c05_single_peak_scans() {
    let start = Instant::now();
    let mut detail = String::new();
    let mut ok = true;
    for (p, q) in PAIRS {
        let e = exps(p, q);
        for s1 in [0.15, 0.35, 0.55, 0.75] {
            let rep = analysis::scan_monotonicity(s1, &e, 256).unwrap();
            if !rep.violations.is_empty() {
                ok = false;
                detail.push_str(&format!(
                    "p={p} q={q} s1={s1}: {:?}; ",
                    rep.violations.first().unwrap()
                ));
            }
            let (agree, total) = rep.agreement();
            if (agree as f64) < 0.99 * total as f64 {
                ok = false;
                detail.push_str(&format!("p={p} q={q} s1={s1}: agreement {agree}/{total}; "));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        ok = false;
        detail.push_str("over 60s; ");
    }
    if detail.is_empty() {
        detail = format!("20 scans clean, {:.2}s", elapsed.as_secs_f64());
    }
    report(5, "single-peak-scan", ok, &detail);
}

#[test]
fn c06_sign_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = 0usize;
    let mut case_a = 0usize;
    for i in 0..500 {
        let (p, q) = PAIRS[i % PAIRS.len()];
        let e = exps(p, q);
        let s1: f64 = rng.gen_range(0.02..0.98);
        let env = DomainPoint::lower_envelope(s1, &e);
        let s2 = (env + rng.gen_range(0.002..0.998) * (1.0 - env)).min(1.0 - 1e-9);
        let s = DomainPoint::new(s1, s2, &e).unwrap();
        let r = bellman_t(&s, &e).unwrap();
        // NaN must count as a violation, hence the explicit check
        if r.delta1.is_nan() || r.delta1 <= 0.0 || r.e1.is_nan() || r.e1 >= 0.0 {
            violations += 1;
        }
        if r.case == Case::A {
            case_a += 1;
            if !r.delta1.is_finite() {
                violations += 1;
            }
        }
    }
    report(
        6,
        "sign-conditions",
        violations == 0,
        &format!("{violations} violations over 500 points ({case_a} case A)"),
    );
}

#[test]
fn c07_strip_bound_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (p, q) = PAIRS[rng.gen_range(0..PAIRS.len())];
        let e = exps(p, q);
        let hi = p / (p - 1.0);
        let t = 1.0 + rng.gen_range(1e-3..1.0 - 1e-3) * (hi - 1.0);
        worst = worst.max(analysis::strip_bound_identity_residual(t, &e).unwrap());
    }
    report(7, "strip-bound-identity", worst <= 1e-11, &format!("max residual {worst:.2e}"));
}

#[test]
fn c08_bracket_margin() {
    let mut ok = true;
    let mut detail = String::new();
    for (p, q) in PAIRS {
        let e = exps(p, q);
        let n = 1000;
        let mut final_margin = f64::NAN;
        for i in 1..=n {
            let s1 = i as f64 / (n + 1) as f64;
            let m = analysis::t_zero_bracket_margin(s1, &e).unwrap();
            if m <= 0.0 {
                ok = false;
                detail.push_str(&format!("p={p} q={q}: margin {m:e} at s1={s1}; "));
            }
            final_margin = m;
        }
        if final_margin.is_nan() || final_margin >= 1e-3 {
            ok = false;
            detail.push_str(&format!("p={p} q={q}: final margin {final_margin:e} >= 1e-3; "));
        }
    }
    if detail.is_empty() {
        detail = "positive on all grids, vanishing at the right end".to_string();
    }
    report(8, "bracket-margin", ok, &detail);
}

#[test]
fn c09_averaging_bound_trials() {
    let start = Instant::now();
    let e = exps(2.0, 1.5);

    // Worked two-piece example against its closed form.
    let two_step = hardy::StepFunction::new(1.0, &[0.5], &[2.0, 1.0]).unwrap();
    let (lhs, _) = hardy::avg_power_integral(&two_step, 2.0).unwrap();
    let exact = 2.75 + std::f64::consts::LN_2;
    let example_ok = (lhs - exact).abs() <= 1e-9;

    let records = hardy::run_trials(0, 1000, &hardy::RandomStepConfig::default(), &e);
    let mut evaluated = 0usize;
    let mut skipped = 0usize;
    let mut failures = 0usize;
    for r in &records {
        match &r.verdict {
            Ok(hardy::TrialVerdict::Evaluated(o)) => {
                evaluated += 1;
                // hard violation: beyond quadrature error plus 1e-7 relative
                if o.margin < -(o.quadrature_error + 1e-7 * o.bound.abs()) {
                    failures += 1;
                }
            }
            Ok(hardy::TrialVerdict::Skipped { .. }) => skipped += 1,
            Err(_) => failures += 1,
        }
    }
    let elapsed = start.elapsed();
    let ok = example_ok && failures == 0 && elapsed.as_secs_f64() < 120.0;
    report(
        9,
        "averaging-bound",
        ok,
        &format!(
            "two-step lhs {lhs:.12} vs {exact:.12}; {evaluated} evaluated, {skipped} skipped, {failures} failures, {:.2}s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c10_sharpness_probe() {
    let e = exps(2.0, 1.5);
    let mut ok = true;
    let mut detail = String::new();
    let mut probes = 0;
    let mut worst_gap = f64::INFINITY;
    for seed in 0u64.. {
        let h = hardy::random_step(seed, &hardy::RandomStepConfig::default());
        let m = hardy::moments(&h, &e);
        if m.validate(&e).is_err() {
            continue;
        }
        let probe = hardy::sharpness_probe(&m, &e, 150, seed).unwrap();
        probes += 1;
        if probe.best_ratio > probe.bound_ratio + 1e-6 {
            ok = false;
            detail.push_str(&format!(
                "seed {seed}: ratio {} above bound {}; ",
                probe.best_ratio, probe.bound_ratio
            ));
        }
        worst_gap = worst_gap.min(probe.gap);
        if probes <= 10 {
            println!(
                "  probe seed {seed:2}: best ratio {:12.9}, bound {:12.9}, gap {:10.3e}",
                probe.best_ratio, probe.bound_ratio, probe.gap
            );
        }
        if probes >= 100 {
            break;
        }
    }
    println!("  ... {probes} probes total, smallest gap {worst_gap:.3e}");
    // Monotone in budget: the longer run continues the same trajectory.
    let h = hardy::random_step(3, &hardy::RandomStepConfig::default());
    let m = hardy::moments(&h, &e);
    let small = hardy::sharpness_probe(&m, &e, 60, 11).unwrap();
    let large = hardy::sharpness_probe(&m, &e, 200, 11).unwrap();
    if large.best_ratio < small.best_ratio {
        ok = false;
        detail.push_str("budget increase lowered the best ratio; ");
    }
    if detail.is_empty() {
        detail = format!("{probes} probes under bound, gap reported above");
    }
    report(10, "sharpness-probe", ok, &detail);
}
