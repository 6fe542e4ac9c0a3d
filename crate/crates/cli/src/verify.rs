//! Verification sweeps behind the `verify` subcommand. Each suite runs a
//! parameter sweep, reports its worst residual or violation count, and
//! passes or fails against a threshold.

use bellman_constant::analysis;
use bellman_constant::constant::{self, bellman_t, Case, DomainPoint};
use bellman_constant::kernel::{self, Exponents};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_PAIRS: [(f64, f64); 5] =
    [(2.0, 1.5), (3.0, 2.0), (2.5, 1.2), (4.0, 3.0), (1.8, 1.3)];

pub const SUITES: [&str; 10] = [
    "roundtrip",
    "critical-tau",
    "critical-balance",
    "a-monotone",
    "f-monotone",
    "bracket-margin",
    "bound-identity",
    "tau-shift",
    "sign-conditions",
    "strip-chain",
];

pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// One summary line: worst residual / violation count plus the threshold.
    pub summary: String,
    /// Inputs of the worst offender when failing.
    pub worst: Option<String>,
    pub skipped: usize,
}

pub struct SweepConfig {
    pub n: usize,
    pub seed: u64,
    /// Threshold override; when set it replaces every suite's default.
    pub tol: Option<f64>,
}

fn pair_exps() -> Vec<Exponents> {
    DEFAULT_PAIRS.iter().map(|&(p, q)| Exponents::new(p, q).unwrap()).collect()
}

struct Worst {
    value: f64,
    inputs: String,
}

impl Worst {
    fn new() -> Self {
        Worst { value: f64::NEG_INFINITY, inputs: String::new() }
    }

    fn update(&mut self, value: f64, inputs: impl FnOnce() -> String) {
        if value > self.value {
            self.value = value;
            self.inputs = inputs();
        }
    }
}

fn residual_outcome(
    name: &'static str,
    worst: Worst,
    default_tol: f64,
    cfg: &SweepConfig,
    skipped: usize,
) -> SuiteOutcome {
    let tol = cfg.tol.unwrap_or(default_tol);
    let passed = worst.value <= tol;
    SuiteOutcome {
        name,
        passed,
        summary: format!("max residual {:.3e} (tol {tol:.1e})", worst.value),
        worst: (!passed).then_some(worst.inputs),
        skipped,
    }
}

fn violations_outcome(
    name: &'static str,
    violations: Vec<(f64, String)>,
    skipped: usize,
) -> SuiteOutcome {
    let passed = violations.is_empty();
    SuiteOutcome {
        name,
        passed,
        summary: format!("{} violations", violations.len()),
        worst: violations.first().map(|(at, why)| format!("at {at}: {why}")),
        skipped,
    }
}

pub fn run_suite(name: &str, cfg: &SweepConfig) -> Result<SuiteOutcome, bellman_constant::Error> {
    match name {
        "roundtrip" => {
            let mut worst = Worst::new();
            for e in pair_exps() {
                for r in [e.p(), e.q()] {
                    for i in 0..1000 {
                        let s = i as f64 / 999.0;
                        let back = kernel::h(kernel::omega(s, r)?, r)?;
                        worst.update((back - s).abs(), || format!("r = {r}, s = {s}"));
                    }
                }
            }
            Ok(residual_outcome("roundtrip", worst, 1e-12, cfg, 0))
        }
        "critical-tau" => {
            let mut worst = Worst::new();
            for e in pair_exps() {
                for i in 1..=cfg.n {
                    let s1 = i as f64 / (cfg.n + 1) as f64;
                    let r = analysis::critical_tau_residual(s1, &e)?;
                    worst.update(r, || format!("p = {}, q = {}, s1 = {s1}", e.p(), e.q()));
                }
            }
            Ok(residual_outcome("critical-tau", worst, 1e-9, cfg, 0))
        }
        "critical-balance" => {
            let mut worst = Worst::new();
            for e in pair_exps() {
                for i in 1..=cfg.n {
                    let s1 = i as f64 / (cfg.n + 1) as f64;
                    let r = analysis::critical_balance_residual(s1, &e)?;
                    worst.update(r, || format!("p = {}, q = {}, s1 = {s1}", e.p(), e.q()));
                }
            }
            Ok(residual_outcome("critical-balance", worst, 1e-8, cfg, 0))
        }
        "a-monotone" => {
            let grid: Vec<f64> = (0..cfg.n)
                .map(|i| 1e-4 + (1.0 - 2e-4) * i as f64 / (cfg.n - 1) as f64)
                .collect();
            let mut violations = Vec::new();
            let mut skipped = 0;
            for e in pair_exps() {
                let check = analysis::a_increasing_violations(e.q(), &grid);
                violations.extend(check.violations);
                skipped += check.skipped.len();
            }
            Ok(violations_outcome("a-monotone", violations, skipped))
        }
        "f-monotone" => {
            let grid: Vec<f64> = (0..cfg.n)
                .map(|i| 1e-4 + (1.0 - 2e-4) * i as f64 / (cfg.n - 1) as f64)
                .collect();
            let mut violations = Vec::new();
            let mut skipped = 0;
            for e in pair_exps() {
                let check = analysis::f_increasing_violations(&e, &grid);
                violations.extend(check.violations);
                skipped += check.skipped.len();
            }
            Ok(violations_outcome("f-monotone", violations, skipped))
        }
        "bracket-margin" => {
            let mut violations = Vec::new();
            for e in pair_exps() {
                let n = cfg.n.max(100);
                for i in 1..=n {
                    let s1 = i as f64 / (n + 1) as f64;
                    let m = analysis::t_zero_bracket_margin(s1, &e)?;
                    if m <= 0.0 {
                        violations.push((s1, format!("margin {m:e} at p = {}, q = {}", e.p(), e.q())));
                    }
                }
            }
            Ok(violations_outcome("bracket-margin", violations, 0))
        }
        "bound-identity" => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut worst = Worst::new();
            let pairs = pair_exps();
            for _ in 0..1000 {
                let e = pairs[rng.gen_range(0..pairs.len())];
                let hi = e.p() / (e.p() - 1.0);
                let t = 1.0 + rng.gen_range(1e-3..1.0 - 1e-3) * (hi - 1.0);
                let r = analysis::strip_bound_identity_residual(t, &e)?;
                worst.update(r, || format!("p = {}, q = {}, t = {t}", e.p(), e.q()));
            }
            Ok(residual_outcome("bound-identity", worst, 1e-11, cfg, 0))
        }
        "tau-shift" => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut worst = Worst::new();
            let pairs = pair_exps();
            for _ in 0..1000 {
                let e = pairs[rng.gen_range(0..pairs.len())];
                let s1: f64 = rng.gen_range(0.02..0.98);
                let env = DomainPoint::lower_envelope(s1, &e);
                let s2 = (env + rng.gen_range(0.01..0.99) * (1.0 - env)).min(1.0 - 1e-9);
                let s = DomainPoint::new(s1, s2, &e)?;
                let t0 = constant::t_zero(&s, &e)?;
                let t = 1.0 + rng.gen_range(0.0..1.0) * (t0 - 1.0);
                let lhs = constant::tau_minus_t_pow_q(&s, t, &e)?;
                let rhs = constant::tau(&s, t, &e)? - t.powf(e.q());
                let res = (lhs - rhs).abs() / rhs.abs().max(1.0);
                worst.update(res, || {
                    format!("p = {}, q = {}, s1 = {s1}, s2 = {s2}, t = {t}", e.p(), e.q())
                });
            }
            Ok(residual_outcome("tau-shift", worst, 1e-12, cfg, 0))
        }
        "sign-conditions" => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut violations = Vec::new();
            let pairs = pair_exps();
            for i in 0..500 {
                let e = pairs[i % pairs.len()];
                let s1: f64 = rng.gen_range(0.02..0.98);
                let env = DomainPoint::lower_envelope(s1, &e);
                let s2 = (env + rng.gen_range(0.002..0.998) * (1.0 - env)).min(1.0 - 1e-9);
                let s = DomainPoint::new(s1, s2, &e)?;
                let r = bellman_t(&s, &e)?;
                // NaN must count as a violation, hence the explicit checks
                if r.delta1.is_nan() || r.delta1 <= 0.0 {
                    violations.push((s1, format!("delta1 = {} at s2 = {s2}", r.delta1)));
                }
                if r.e1.is_nan() || r.e1 >= 0.0 {
                    violations.push((s1, format!("e1 = {} at s2 = {s2}", r.e1)));
                }
            }
            Ok(violations_outcome("sign-conditions", violations, 0))
        }
        "strip-chain" => {
            let mut violations = Vec::new();
            let mut skipped = 0;
            for e in pair_exps() {
                for s1 in [0.35, 0.55, 0.75, 0.9] {
                    let s2c = analysis::s2_critical(s1, &e)?;
                    let left = match analysis::case_boundary(s1, &e)? {
                        Some(b) => b,
                        None => DomainPoint::lower_envelope(s1, &e) + analysis::GRID_INSET,
                    };
                    if left >= s2c {
                        skipped += 1;
                        continue;
                    }
                    for frac in [0.2, 0.5, 0.8, 0.95] {
                        let s2 = left + frac * (s2c - left);
                        let s = DomainPoint::new(s1, s2, &e)?;
                        if bellman_t(&s, &e)?.case != Case::A {
                            skipped += 1;
                            continue;
                        }
                        let m = analysis::strip_chain_margins(&s, &e)?;
                        if m.min_margin() < -1e-10 {
                            violations.push((
                                s2,
                                format!(
                                    "margin {:e} at p = {}, q = {}, s1 = {s1}",
                                    m.min_margin(),
                                    e.p(),
                                    e.q()
                                ),
                            ));
                        }
                        if m.alpha_closed_residual > 1e-10 {
                            violations.push((
                                s2,
                                format!("alpha closed form residual {:e}", m.alpha_closed_residual),
                            ));
                        }
                    }
                }
            }
            Ok(violations_outcome("strip-chain", violations, skipped))
        }
        other => Err(bellman_constant::Error::Domain(format!("unknown suite `{other}`"))),
    }
}
