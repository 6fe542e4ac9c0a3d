//! Verification layer: the critical point `s2'`, the analytic sign predictor
//! for the derivative of `t` in `s2`, finite-difference cross-checks, grid
//! scans, residual checks for the structural identities, and the translation
//! of the sign pattern to the moment side.

use crate::constant::{self, bellman_t, BellmanResult, Case, DomainPoint, MomentTriple};
use crate::error::Error;
use crate::kernel::{self, Exponents};
use crate::par;

/// Inset of scan grids from the domain boundary and from `s2 = 1`.
pub const GRID_INSET: f64 = 1e-4;
/// Relative dead-band around the predictor's zero; finite differences cannot
/// resolve the sign inside it.
pub const PRED_DEAD_BAND: f64 = 1e-9;
/// Absolute band below which a finite-difference value is classified as zero.
pub const FD_SIGN_BAND: f64 = 1e-5;

/// Sign classification used by the predictor and the finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    /// Classify `x` with a symmetric dead-band of width `band`.
    pub fn of(x: f64, band: f64) -> Sign {
        if x.abs() <= band {
            Sign::Zero
        } else if x > 0.0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Neg => "-",
            Sign::Zero => "0",
            Sign::Pos => "+",
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The critical second coordinate `s2' = H_q(omega_p(s1))`, where the
/// derivative of `t` in `s2` changes sign and `t` attains `omega_p(s1)`.
pub fn s2_critical(s1: f64, exps: &Exponents) -> Result<f64, Error> {
    if !(s1 > 0.0 && s1 < 1.0) {
        return Err(Error::domain(format!("s1 = {s1} must lie in (0, 1)")));
    }
    let w = kernel::omega(s1, exps.p())?;
    kernel::h(w, exps.q())
}

/// Analytic sign of the derivative of `t` in `s2`.
///
/// In case A the identity behind the derivative gives
/// `sign = sign(F(tau*) - (p-q) A(s2))` (the positive factor in front of the
/// derivative is dropped). In case B the endpoint equation differentiates to
/// a strictly positive derivative, so the predictor returns `Pos` directly.
pub fn dt_ds2_sign_pred(s: &DomainPoint, exps: &Exponents) -> Result<Sign, Error> {
    let r = bellman_t(s, exps)?;
    pred_from_result(s, &r, exps)
}

fn pred_from_result(s: &DomainPoint, r: &BellmanResult, exps: &Exponents) -> Result<Sign, Error> {
    match r.case {
        Case::B => Ok(Sign::Pos),
        Case::A => {
            let tau_star = r.tau.ok_or_else(|| {
                Error::Inconsistent("case A result without tau".to_string())
            })?;
            let f = kernel::f_of_tau(tau_star, exps)?;
            let a = kernel::a_of_s2(s.s2(), exps.q())?;
            let diff = f - (exps.p() - exps.q()) * a;
            Ok(Sign::of(diff, PRED_DEAD_BAND * f.abs().max(1.0)))
        }
    }
}

/// Default step for the central difference: small relative to the distance
/// from both domain boundaries.
pub fn fd_default_step(s: &DomainPoint, exps: &Exponents) -> f64 {
    let env = DomainPoint::lower_envelope(s.s1(), exps);
    1e-6 * (s.s2() - env).min(1.0 - s.s2()).min(1.0)
}

/// Central finite difference of `t(s1, .)` at `s` with step `h`.
pub fn dt_ds2_fd(s: &DomainPoint, exps: &Exponents, h: f64) -> Result<f64, Error> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::StepTooLarge { s2: s.s2(), h });
    }
    let (lo, hi) = (s.s2() - h, s.s2() + h);
    if !constant::in_domain(s.s1(), lo, exps) || !constant::in_domain(s.s1(), hi, exps) {
        return Err(Error::StepTooLarge { s2: s.s2(), h });
    }
    let t_hi = bellman_t(&DomainPoint::new(s.s1(), hi, exps)?, exps)?.t;
    let t_lo = bellman_t(&DomainPoint::new(s.s1(), lo, exps)?, exps)?.t;
    Ok((t_hi - t_lo) / (2.0 * h))
}

/// One grid point of a monotonicity scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub s2: f64,
    pub t: f64,
    pub case: Case,
    pub t0: f64,
    /// `tau` at the solution (case A only).
    pub tau: Option<f64>,
    /// `F(tau*)` in case A, NaN in case B where `tau = 1` is singular for F.
    pub f_tau: f64,
    pub a_s2: f64,
    pub pred: Sign,
    pub fd: f64,
    pub fd_sign: Sign,
}

/// Result of scanning `t(s1, .)` over an `s2` grid.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub s1: f64,
    pub exps: Exponents,
    pub rows: Vec<ScanRow>,
    pub s2_critical: f64,
    /// Location of the maximum, refined inside the bracketing grid cells.
    pub peak_s2: f64,
    pub peak_t: f64,
    pub violations: Vec<(f64, String)>,
}

impl MonotonicityReport {
    /// Grid cell width.
    pub fn cell(&self) -> f64 {
        if self.rows.len() < 2 {
            return 0.0;
        }
        self.rows[1].s2 - self.rows[0].s2
    }

    /// Rows outside the dead-band (predictor not Zero and |fd| above the
    /// sign band), and how many of those agree in sign with the predictor.
    pub fn agreement(&self) -> (usize, usize) {
        let mut total = 0;
        let mut agree = 0;
        for row in &self.rows {
            if row.pred == Sign::Zero || row.fd_sign == Sign::Zero {
                continue;
            }
            total += 1;
            if row.pred == row.fd_sign {
                agree += 1;
            }
        }
        (agree, total)
    }

    /// Largest |fd| among disagreeing non-dead-band rows (0 if none).
    pub fn worst_disagreement_fd(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.pred != Sign::Zero && r.fd_sign != Sign::Zero && r.pred != r.fd_sign)
            .map(|r| r.fd.abs())
            .fold(0.0, f64::max)
    }
}

fn golden_max<F>(f: F, mut a: f64, mut b: f64) -> Result<(f64, f64), Error>
where
    F: Fn(f64) -> Result<f64, Error>,
{
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    Ok((mid, f(mid)?))
}

/// Scans `t(s1, .)` on a uniform `n`-point grid over
/// `[envelope + inset, 1 - inset]` and verifies the single-peak shape: rising
/// left of `s2'`, falling right of it, peak at `s2'` with value
/// `omega_p(s1)`. Check failures are recorded as violations, not errors.
pub fn scan_monotonicity(
    s1: f64,
    exps: &Exponents,
    n: usize,
) -> Result<MonotonicityReport, Error> {
    if n < 16 {
        return Err(Error::domain(format!("grid size n = {n} must be at least 16")));
    }
    if !(s1 > 0.0 && s1 < 1.0) {
        return Err(Error::domain(format!("s1 = {s1} must lie in (0, 1)")));
    }
    let env = DomainPoint::lower_envelope(s1, exps);
    let lo = env + GRID_INSET;
    let hi = 1.0 - GRID_INSET;
    if lo >= hi {
        return Err(Error::domain(format!(
            "domain slice at s1 = {s1} is thinner than twice the grid inset"
        )));
    }
    let s2c = s2_critical(s1, exps)?;
    let omega_p = kernel::omega(s1, exps.p())?;

    let grid: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let exps_copy = *exps;
    let outcomes = par::map_collect(grid, move |s2| -> (f64, Result<ScanRow, Error>) {
        let row = (|| {
            let s = DomainPoint::new(s1, s2, &exps_copy)?;
            let r = bellman_t(&s, &exps_copy)?;
            let a_s2 = kernel::a_of_s2(s2, exps_copy.q())?;
            let f_tau = match r.tau {
                Some(tv) => kernel::f_of_tau(tv, &exps_copy)?,
                None => f64::NAN,
            };
            let pred = pred_from_result(&s, &r, &exps_copy)?;
            let fd = dt_ds2_fd(&s, &exps_copy, fd_default_step(&s, &exps_copy))?;
            Ok(ScanRow {
                s2,
                t: r.t,
                case: r.case,
                t0: r.t0,
                tau: r.tau,
                f_tau,
                a_s2,
                pred,
                fd,
                fd_sign: Sign::of(fd, FD_SIGN_BAND),
            })
        })();
        (s2, row)
    });

    let mut rows = Vec::with_capacity(n);
    let mut violations = Vec::new();
    for (s2, outcome) in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(e) => violations.push((s2, format!("evaluation failed: {e}"))),
        }
    }
    if rows.len() < 4 {
        return Err(Error::Inconsistent(format!(
            "scan at s1 = {s1} produced only {} usable rows",
            rows.len()
        )));
    }
    let cell = rows[1].s2 - rows[0].s2;

    // Peak: grid argmax, then a golden-section refinement on the bracketing
    // cells. t <= omega_p(s1) with equality only at s2', so the refined value
    // approaches omega_p from below.
    let (imax, _) = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.t.total_cmp(&b.1.t))
        .expect("nonempty rows");
    let bracket_lo = if imax == 0 { rows[0].s2 } else { rows[imax - 1].s2 };
    let bracket_hi = if imax + 1 == rows.len() { rows[imax].s2 } else { rows[imax + 1].s2 };
    let t_at = |s2: f64| -> Result<f64, Error> {
        Ok(bellman_t(&DomainPoint::new(s1, s2, exps)?, exps)?.t)
    };
    let (peak_s2, peak_t) = golden_max(t_at, bracket_lo, bracket_hi)?;

    // Shape checks. Cells touching s2' are exempt from the strict
    // comparisons; the derivative vanishes there.
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.s2 <= s2c - cell && b.t <= a.t {
            violations.push((b.s2, format!("not increasing left of s2': t fell from {} to {}", a.t, b.t)));
        }
        if a.s2 >= s2c + cell && b.t >= a.t {
            violations.push((b.s2, format!("not decreasing right of s2': t rose from {} to {}", a.t, b.t)));
        }
    }

    // The finite-difference derivative must change sign exactly once, within
    // one grid cell of s2'.
    let signed: Vec<(f64, Sign)> = rows
        .iter()
        .filter(|r| r.fd_sign != Sign::Zero)
        .map(|r| (r.s2, r.fd_sign))
        .collect();
    let mut transitions = Vec::new();
    for w in signed.windows(2) {
        if w[0].1 != w[1].1 {
            transitions.push((w[0].0, w[1].0, w[0].1, w[1].1));
        }
    }
    match transitions.as_slice() {
        [] => violations.push((s2c, "no sign change of the fd derivative".to_string())),
        [(lo_s2, hi_s2, from, to)] => {
            if *from != Sign::Pos || *to != Sign::Neg {
                violations.push((*lo_s2, format!("fd sign change is {from:?} -> {to:?}, expected Pos -> Neg")));
            }
            if s2c < lo_s2 - cell || s2c > hi_s2 + cell {
                violations.push((
                    *lo_s2,
                    format!("fd sign change between {lo_s2} and {hi_s2} is more than one cell from s2' = {s2c}"),
                ));
            }
        }
        many => violations.push((
            many[0].0,
            format!("{} sign changes of the fd derivative, expected one", many.len()),
        )),
    }

    if (peak_s2 - s2c).abs() > cell + 1e-12 {
        violations.push((peak_s2, format!("peak at {peak_s2} is more than one cell from s2' = {s2c}")));
    }
    if (peak_t - omega_p).abs() > 1e-6 {
        violations.push((peak_s2, format!("peak value {peak_t} differs from omega_p(s1) = {omega_p} by more than 1e-6")));
    }

    Ok(MonotonicityReport {
        s1,
        exps: *exps,
        rows,
        s2_critical: s2c,
        peak_s2,
        peak_t,
        violations,
    })
}

/// Residual of the critical-point fixed point: at `s2 = s2'(s1)` and
/// `t = omega_p(s1)`, the ratio `tau` must equal `s2'` itself.
pub fn critical_tau_residual(s1: f64, exps: &Exponents) -> Result<f64, Error> {
    let s2c = s2_critical(s1, exps)?;
    let s = DomainPoint::new(s1, s2c, exps)?;
    let w = kernel::omega(s1, exps.p())?;
    let tau_prime = constant::tau(&s, w, exps)?;
    Ok((tau_prime - s2c).abs())
}

/// Relative residual of the critical balance `F(tau') = (p-q) A(s2')`, which
/// makes the derivative predictor vanish at `s2'`.
pub fn critical_balance_residual(s1: f64, exps: &Exponents) -> Result<f64, Error> {
    let s2c = s2_critical(s1, exps)?;
    let s = DomainPoint::new(s1, s2c, exps)?;
    let w = kernel::omega(s1, exps.p())?;
    let tau_prime = constant::tau(&s, w, exps)?;
    let f = kernel::f_of_tau(tau_prime, exps)?;
    let a = kernel::a_of_s2(s2c, exps.q())?;
    Ok((f - (exps.p() - exps.q()) * a).abs() / f.abs().max(1.0))
}

/// Outcome of a pointwise monotonicity check over a grid: hard violations and
/// points skipped because a guarded singularity fired.
#[derive(Debug, Clone, Default)]
pub struct GridCheck {
    pub violations: Vec<(f64, String)>,
    pub skipped: Vec<(f64, String)>,
}

impl GridCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `A` is strictly increasing along `grid` and that the
/// derivative of its gamma-form `A1` is negative on the mapped grid.
pub fn a_increasing_violations(q: f64, grid: &[f64]) -> GridCheck {
    let mut check = GridCheck::default();
    let mut prev: Option<(f64, f64)> = None;
    for &s2 in grid {
        let a = match kernel::a_of_s2(s2, q) {
            Ok(a) => a,
            Err(e @ Error::Singular { .. }) => {
                check.skipped.push((s2, e.to_string()));
                continue;
            }
            Err(e) => {
                check.violations.push((s2, e.to_string()));
                continue;
            }
        };
        if let Some((ps2, pa)) = prev {
            if a <= pa {
                check.violations.push((s2, format!("A({s2}) = {a} <= A({ps2}) = {pa}")));
            }
        }
        prev = Some((s2, a));
        match kernel::omega(s2, q).and_then(|g| kernel::a1_prime_of_gamma(g, q)) {
            Ok(d) if d < 0.0 => {}
            Ok(d) => check.violations.push((s2, format!("A1'(omega_q({s2})) = {d} not negative"))),
            Err(e @ Error::Singular { .. }) => check.skipped.push((s2, e.to_string())),
            Err(e) => check.violations.push((s2, e.to_string())),
        }
    }
    check
}

/// Checks that `F` is strictly increasing along a `tau` grid and that its
/// gamma-form `F1` decreases on the mapped grid.
pub fn f_increasing_violations(exps: &Exponents, grid: &[f64]) -> GridCheck {
    let mut check = GridCheck::default();
    let mut prev: Option<(f64, f64)> = None;
    let mut prev_f1: Option<(f64, f64)> = None;
    for &tau in grid {
        let f = match kernel::f_of_tau(tau, exps) {
            Ok(f) => f,
            Err(e @ Error::Singular { .. }) => {
                check.skipped.push((tau, e.to_string()));
                continue;
            }
            Err(e) => {
                check.violations.push((tau, e.to_string()));
                continue;
            }
        };
        if let Some((pt, pf)) = prev {
            if f <= pf {
                check.violations.push((tau, format!("F({tau}) = {f} <= F({pt}) = {pf}")));
            }
        }
        prev = Some((tau, f));
        // gamma = omega_q(tau) runs decreasingly, so F1 must increase along
        // the mapped sequence exactly when it decreases in gamma.
        match kernel::omega(tau, exps.q()).and_then(|g| kernel::f1_of_gamma(g, exps).map(|v| (g, v))) {
            Ok((g, f1)) => {
                if let Some((pg, pf1)) = prev_f1 {
                    if g < pg && f1 <= pf1 {
                        check.violations.push((tau, format!(
                            "F1 not decreasing in gamma: F1({g}) = {f1} <= F1({pg}) = {pf1}"
                        )));
                    }
                }
                prev_f1 = Some((g, f1));
            }
            Err(e @ Error::Singular { .. }) => check.skipped.push((tau, e.to_string())),
            Err(e) => check.violations.push((tau, e.to_string())),
        }
    }
    check
}

/// Margin of the strict inequality `q + (p-q) s1 > p s1^{(p-q)/(p-1)}` that
/// guarantees `G(1) < 0`, i.e. a valid bracket `[1, t0]`. Positive on (0, 1),
/// vanishing as `s1 -> 1`.
pub fn t_zero_bracket_margin(s1: f64, exps: &Exponents) -> Result<f64, Error> {
    if !(s1 > 0.0 && s1 < 1.0) {
        return Err(Error::domain(format!("s1 = {s1} must lie in (0, 1)")));
    }
    let (p, q) = (exps.p(), exps.q());
    Ok(q + (p - q) * s1 - p * s1.powf((p - q) / (p - 1.0)))
}

/// Residual of the closed-form identity
/// `(p-q)(t-1)/(q-(q-1)t) = (t^{p-q} - H_p(t)/H_q(t)) t^{q-p}` on
/// `(1, p/(p-1))`, the equality case of the strip bound below.
pub fn strip_bound_identity_residual(t: f64, exps: &Exponents) -> Result<f64, Error> {
    let (p, q) = (exps.p(), exps.q());
    let hi = p / (p - 1.0);
    if !(t > 1.0 && t < hi) {
        return Err(Error::domain(format!("t = {t} must lie strictly inside (1, {hi})")));
    }
    let lhs = (p - q) * (t - 1.0) / (q - (q - 1.0) * t);
    let rhs = (t.powf(p - q) - kernel::h(t, p)? / kernel::h(t, q)?) * t.powf(q - p);
    Ok((lhs - rhs).abs())
}

/// Margins of the inequality chain that forces the predictor positive on the
/// rising strip `(s2'', s2')`. All must be nonnegative there (up to 1e-10).
#[derive(Debug, Clone, Copy)]
pub struct StripMargins {
    /// `F(tau) - (p-q) A(s2)`: the predictor itself.
    pub predictor: f64,
    /// `omega_p(s1) - omega_q(tau)`.
    pub omega_gap: f64,
    /// `(p-q) alpha(s2) / (t^{p-q} - s1/s2) - q / omega_p(s1)^{p-q}`.
    pub alpha_ratio: f64,
    /// Same ratio with `alpha(s2)` replaced by its infimum over the strip,
    /// the closed form at `s2'`.
    pub alpha_ratio_critical: f64,
    /// The fully reduced form with `t` and `s2` pushed to their extremes.
    pub envelope: f64,
    /// |closed form - alpha(s2')|; the closed form is
    /// `q (omega_p - 1) / (q - (q-1) omega_p)`.
    pub alpha_closed_residual: f64,
}

impl StripMargins {
    pub fn min_margin(&self) -> f64 {
        self.predictor
            .min(self.omega_gap)
            .min(self.alpha_ratio)
            .min(self.alpha_ratio_critical)
            .min(self.envelope)
    }
}

/// Evaluates the rising-strip inequality chain at a case-A point left of
/// `s2'`.
pub fn strip_chain_margins(s: &DomainPoint, exps: &Exponents) -> Result<StripMargins, Error> {
    let (p, q) = (exps.p(), exps.q());
    let s2c = s2_critical(s.s1(), exps)?;
    if s.s2() >= s2c {
        return Err(Error::domain(format!(
            "s2 = {} is not left of the critical point {s2c}",
            s.s2()
        )));
    }
    let r = bellman_t(s, exps)?;
    if r.case != Case::A {
        return Err(Error::domain(format!(
            "({}, {}) resolves to case B; the strip chain needs the sign-change case",
            s.s1(),
            s.s2()
        )));
    }
    let tau_star = r.tau.expect("case A carries tau");
    let w_p = kernel::omega(s.s1(), p)?;
    let w_tau = kernel::omega(tau_star, q)?;
    let f = kernel::f_of_tau(tau_star, exps)?;
    let a = kernel::a_of_s2(s.s2(), q)?;
    let alpha = kernel::alpha(s.s2(), q)?;
    let alpha_critical = q * (w_p - 1.0) / (q - (q - 1.0) * w_p);
    let denom = r.t.powf(p - q) - s.s1() / s.s2();

    Ok(StripMargins {
        predictor: f - (p - q) * a,
        omega_gap: w_p - w_tau,
        alpha_ratio: (p - q) * alpha / denom - q / w_p.powf(p - q),
        alpha_ratio_critical: (p - q) * alpha_critical / denom - q / w_p.powf(p - q),
        envelope: (p - q) * alpha_critical
            - q * (w_p.powf(p - q) - s.s1() / s.s2()) * w_p.powf(q - p),
        alpha_closed_residual: (alpha_critical - kernel::alpha(s2c, q)?).abs(),
    })
}

/// Operational left end of the case-A strip: the infimum of the `s2` values
/// whose case tag is A, located by bisection on the tag. `None` when the
/// whole sampled slice is already case A.
pub fn case_boundary(s1: f64, exps: &Exponents) -> Result<Option<f64>, Error> {
    let env = DomainPoint::lower_envelope(s1, exps);
    let s2c = s2_critical(s1, exps)?;
    let lo = env + GRID_INSET;
    if lo >= s2c {
        return Err(Error::domain(format!(
            "no room between the envelope and s2' at s1 = {s1}"
        )));
    }
    let case_at = |s2: f64| -> Result<Case, Error> {
        Ok(bellman_t(&DomainPoint::new(s1, s2, exps)?, exps)?.case)
    };
    if case_at(lo)? == Case::A {
        return Ok(None);
    }
    if case_at(s2c)? == Case::B {
        return Err(Error::Inconsistent(format!(
            "case B persists at the critical point for s1 = {s1}"
        )));
    }
    let (mut a, mut b) = (lo, s2c);
    while b - a > 1e-12 {
        let mid = 0.5 * (a + b);
        if case_at(mid)? == Case::B {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// The pivot moment coordinate `y0` at which the sign of the derivative in
/// `y` flips, with the admissibility window it must fall inside.
#[derive(Debug, Clone, Copy)]
pub struct YPivot {
    pub y0: f64,
    /// `x^q / kappa^{q-1}`, the open lower end of the window.
    pub lower: f64,
    /// `x^{(p-q)/(p-1)} z^{(q-1)/(p-1)}`, the closed upper end.
    pub upper: f64,
}

/// `y0 = x^q / (kappa^{q-1} H_q(omega_p(s1)))` with `s1 = x^p/(kappa^{p-1} z)`.
/// The corresponding `s2(y0)` is exactly `s2'(s1)`.
pub fn y_zero(x: f64, z: f64, kappa: f64, exps: &Exponents) -> Result<YPivot, Error> {
    let (p, q) = (exps.p(), exps.q());
    for (name, v) in [("x", x), ("z", z), ("kappa", kappa)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::domain(format!("{name} = {v} must be positive")));
        }
    }
    let s1 = x.powf(p) / (kappa.powf(p - 1.0) * z);
    if s1 >= 1.0 {
        return Err(Error::domain(format!(
            "x^p / kappa^(p-1) = {} must be below z = {z}",
            s1 * z
        )));
    }
    let s2c = s2_critical(s1, exps)?;
    let y0 = x.powf(q) / (kappa.powf(q - 1.0) * s2c);
    let lower = x.powf(q) / kappa.powf(q - 1.0);
    let upper = x.powf((p - q) / (p - 1.0)) * z.powf((q - 1.0) / (p - 1.0));
    if !(y0 > lower && y0 <= upper * (1.0 + 1e-12)) {
        return Err(Error::Inconsistent(format!(
            "y0 = {y0} escaped its window ({lower}, {upper}]"
        )));
    }
    Ok(YPivot { y0, lower, upper })
}

/// Predicted sign of the derivative of the constant in the moment coordinate
/// `y`. The chain rule flips the `s2` sign: `ds2/dy = -x^q/(kappa^{q-1} y^2)`
/// is negative.
pub fn dy_sign_pred(m: &MomentTriple, exps: &Exponents) -> Result<Sign, Error> {
    let s = constant::moments_to_domain(m, exps)?;
    Ok(match dt_ds2_sign_pred(&s, exps)? {
        Sign::Pos => Sign::Neg,
        Sign::Neg => Sign::Pos,
        Sign::Zero => Sign::Zero,
    })
}
