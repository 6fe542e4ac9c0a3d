//! Desk-scale verification of the averaging-operator bound: build step
//! functions with prescribed moments, integrate the p-th power of their
//! running average, and confirm it stays below `t^p(s1, s2)` times the p-th
//! moment.

use crate::constant::{self, bellman_t, Case, MomentTriple};
use crate::error::Error;
use crate::kernel::Exponents;
use crate::par;
use crate::quad;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Nonnegative piecewise-constant function on `(0, kappa]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    kappa: f64,
    /// `n + 1` piece bounds, `bounds[0] = 0`, `bounds[n] = kappa`.
    bounds: Vec<f64>,
    /// Piece values on `(bounds[i], bounds[i+1]]`.
    values: Vec<f64>,
}

impl StepFunction {
    /// Builds a step function from interior breakpoints (strictly increasing,
    /// inside `(0, kappa)`) and one value per piece.
    pub fn new(kappa: f64, interior: &[f64], values: &[f64]) -> Result<Self, Error> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::domain(format!("kappa = {kappa} must be positive")));
        }
        if values.len() != interior.len() + 1 {
            return Err(Error::domain(format!(
                "{} breakpoints require {} values, got {}",
                interior.len(),
                interior.len() + 1,
                values.len()
            )));
        }
        let mut bounds = Vec::with_capacity(values.len() + 1);
        bounds.push(0.0);
        bounds.extend_from_slice(interior);
        bounds.push(kappa);
        for w in bounds.windows(2) {
            if !(w[1].is_finite() && w[1] > w[0]) {
                return Err(Error::domain(format!(
                    "breakpoints must increase strictly inside (0, kappa): {} !< {}",
                    w[0], w[1]
                )));
            }
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::domain("piece values must be finite and nonnegative".to_string()));
        }
        if values.iter().all(|v| *v == 0.0) {
            return Err(Error::domain("at least one piece value must be positive".to_string()));
        }
        Ok(StepFunction { kappa, bounds, values: values.to_vec() })
    }

    pub fn constant(value: f64, kappa: f64) -> Result<Self, Error> {
        StepFunction::new(kappa, &[], &[value])
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn n_pieces(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    /// Pointwise scaling `h -> lambda h`.
    pub fn scaled(&self, lambda: f64) -> Result<StepFunction, Error> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain(format!("scale {lambda} must be positive")));
        }
        Ok(StepFunction {
            kappa: self.kappa,
            bounds: self.bounds.clone(),
            values: self.values.iter().map(|v| v * lambda).collect(),
        })
    }
}

/// Exact moments of a step function: `x`, `y`, `z` are the integrals of `h`,
/// `h^q`, `h^p` over `(0, kappa]`.
pub fn moments(h: &StepFunction, exps: &Exponents) -> MomentTriple {
    let (p, q) = (exps.p(), exps.q());
    let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
    for (i, &a) in h.values.iter().enumerate() {
        let du = h.bounds[i + 1] - h.bounds[i];
        x += a * du;
        y += a.powf(q) * du;
        z += a.powf(p) * du;
    }
    MomentTriple { x, y, z, kappa: h.kappa }
}

/// Integral of the p-th power of the running average,
/// `int_0^kappa ((1/u) int_0^u h)^p du`, with an error estimate.
///
/// On the first piece the average is constant, so that piece is exact; later
/// pieces are smooth and go through adaptive quadrature.
pub fn avg_power_integral(h: &StepFunction, p: f64) -> Result<(f64, f64), Error> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::domain(format!("exponent p = {p} must exceed 1")));
    }
    let mut total = 0.0;
    let mut err = 0.0;
    let mut accumulated = 0.0; // integral of h up to the current piece start
    for (i, &a) in h.values.iter().enumerate() {
        let (u0, u1) = (h.bounds[i], h.bounds[i + 1]);
        if i == 0 {
            total += a.powf(p) * (u1 - u0);
        } else {
            let c = accumulated;
            let integrand = move |u: f64| ((c + a * (u - u0)) / u).powf(p);
            let first = ((c + a * 0.5 * (u1 - u0)) / (0.5 * (u0 + u1))).powf(p) * (u1 - u0);
            let tol = 1e-10 * first.abs().max(1.0);
            let (v, e) = quad::integrate(&integrand, u0, u1, tol)?;
            total += v;
            err += e;
        }
        accumulated += a * (u1 - u0);
    }
    Ok((total, err))
}

/// A fully evaluated inequality trial.
#[derive(Debug, Clone, Copy)]
pub struct TrialOutcome {
    pub moments: MomentTriple,
    pub s1: f64,
    pub s2: f64,
    pub t: f64,
    pub case: Case,
    /// Integral of the running-average power.
    pub lhs: f64,
    /// `t^p * z`.
    pub bound: f64,
    /// `bound - lhs`; negative beyond the quadrature slack means violation.
    pub margin: f64,
    pub quadrature_error: f64,
}

impl TrialOutcome {
    /// The bound holds up to quadrature error and a relative slack.
    pub fn passes(&self) -> bool {
        self.margin >= -(self.quadrature_error + 1e-9 * self.bound)
    }
}

/// Result of one inequality check: evaluated, or skipped because the moments
/// fall outside the admissible window (the bound says nothing there).
#[derive(Debug, Clone)]
pub enum TrialVerdict {
    Evaluated(TrialOutcome),
    Skipped { reason: String },
}

/// Checks the averaging bound for one step function.
pub fn check_inequality(h: &StepFunction, exps: &Exponents) -> Result<TrialVerdict, Error> {
    let m = moments(h, exps);
    let s = match constant::moments_to_domain(&m, exps) {
        Ok(s) => s,
        Err(e @ Error::Domain(_)) => {
            return Ok(TrialVerdict::Skipped { reason: e.to_string() })
        }
        Err(e) => return Err(e),
    };
    let r = bellman_t(&s, exps)?;
    let (lhs, qerr) = avg_power_integral(h, exps.p())?;
    let bound = r.t.powf(exps.p()) * m.z;
    Ok(TrialVerdict::Evaluated(TrialOutcome {
        moments: m,
        s1: s.s1(),
        s2: s.s2(),
        t: r.t,
        case: r.case,
        lhs,
        bound,
        margin: bound - lhs,
        quadrature_error: qerr,
    }))
}

/// Shape of the random step functions used in trials.
#[derive(Debug, Clone, Copy)]
pub struct RandomStepConfig {
    /// Inclusive range for the number of pieces.
    pub pieces: (usize, usize),
    /// Values are log-uniform in this range.
    pub value_range: (f64, f64),
    pub kappa: f64,
}

impl Default for RandomStepConfig {
    fn default() -> Self {
        RandomStepConfig { pieces: (1, 8), value_range: (0.1, 10.0), kappa: 1.0 }
    }
}

/// Deterministic random step function: a given seed always produces the same
/// function.
pub fn random_step(seed: u64, config: &RandomStepConfig) -> StepFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(config.pieces.0..=config.pieces.1.max(config.pieces.0));
    let (lo, hi) = config.value_range;
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let kappa = config.kappa;
    let interior = loop {
        let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.0..kappa)).collect();
        cuts.sort_by(f64::total_cmp);
        let min_gap = kappa * 1e-9;
        let ok = cuts.iter().all(|&c| c > min_gap && c < kappa - min_gap)
            && cuts.windows(2).all(|w| w[1] - w[0] > min_gap);
        if ok {
            break cuts;
        }
    };
    let values: Vec<f64> = (0..n).map(|_| rng.gen_range(ln_lo..ln_hi).exp()).collect();
    StepFunction::new(kappa, &interior, &values).expect("generated function is valid")
}

/// One seeded trial.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub seed: u64,
    pub n_pieces: usize,
    pub verdict: Result<TrialVerdict, Error>,
}

/// Runs `n` seeded trials (seeds `base_seed .. base_seed + n`), in parallel
/// when the `parallel` feature is on. Output order is by seed either way.
pub fn run_trials(
    base_seed: u64,
    n: usize,
    config: &RandomStepConfig,
    exps: &Exponents,
) -> Vec<TrialRecord> {
    let config = *config;
    let exps = *exps;
    let seeds: Vec<u64> = (0..n as u64).map(|i| base_seed + i).collect();
    par::map_collect(seeds, move |seed| {
        let h = random_step(seed, &config);
        TrialRecord { seed, n_pieces: h.n_pieces(), verdict: check_inequality(&h, &exps) }
    })
}

/// Outcome of a sharpness probe.
#[derive(Debug, Clone, Copy)]
pub struct ProbeResult {
    /// Largest `lhs / z` found over step functions with the given moments.
    pub best_ratio: f64,
    /// `t^p` at the mapped domain point: the proven ceiling.
    pub bound_ratio: f64,
    /// `bound_ratio - best_ratio` (how much of the bound the search reached).
    pub gap: f64,
    /// Accepted proposals.
    pub accepted: usize,
    /// Total candidate evaluations.
    pub evaluated: usize,
}

/// Piece counts the probe tries in turn; more (equal-width) pieces widen the
/// family of representable moment triples at the cost of slower candidates.
const PROBE_PIECE_LADDER: [usize; 4] = [6, 12, 24, 48];

/// Projects `values` back onto the moment manifold {x, y, z fixed} by Newton
/// iteration on the three constraint residuals (Gauss-Newton step through the
/// 3x3 Gram system). Fails if a value turns negative or the iteration stalls.
fn moment_residual(values: &[f64], widths: &[f64], m: &MomentTriple, p: f64, q: f64) -> [f64; 3] {
    let (mut rx, mut ry, mut rz) = (-m.x, -m.y, -m.z);
    for (a, w) in values.iter().zip(widths) {
        rx += a * w;
        ry += a.powf(q) * w;
        rz += a.powf(p) * w;
    }
    [rx, ry, rz]
}

fn norm3(r: &[f64; 3]) -> f64 {
    r[0].abs().max(r[1].abs()).max(r[2].abs())
}

fn project_to_moments(
    values: &mut [f64],
    widths: &[f64],
    m: &MomentTriple,
    exps: &Exponents,
) -> bool {
    let (p, q) = (exps.p(), exps.q());
    let scale = m.x.abs().max(m.y.abs()).max(m.z.abs()).max(1.0);
    let mut res = moment_residual(values, widths, m, p, q);
    for _ in 0..120 {
        let norm = norm3(&res);
        if norm <= 1e-12 * scale {
            return true;
        }
        // J rows: d(moment)/d(a_i)
        let n = values.len();
        let mut j = vec![[0.0f64; 3]; n];
        for (i, (a, w)) in values.iter().zip(widths).enumerate() {
            j[i] = [*w, q * a.powf(q - 1.0) * w, p * a.powf(p - 1.0) * w];
        }
        let mut g = [[0.0f64; 3]; 3];
        for row in &j {
            for r in 0..3 {
                for c in 0..3 {
                    g[r][c] += row[r] * row[c];
                }
            }
        }
        let lambda = match solve3(&g, &res) {
            Some(l) => l,
            None => return false,
        };
        // Backtracking: shrink the Gauss-Newton step until values stay
        // positive and the residual actually decreases.
        let mut accepted = false;
        let mut factor = 1.0;
        for _ in 0..30 {
            let cand: Vec<f64> = values
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    a - factor * (j[i][0] * lambda[0] + j[i][1] * lambda[1] + j[i][2] * lambda[2])
                })
                .collect();
            if cand.iter().all(|a| a.is_finite() && *a > 0.0) {
                let cand_res = moment_residual(&cand, widths, m, p, q);
                if norm3(&cand_res) < norm {
                    values.copy_from_slice(&cand);
                    res = cand_res;
                    accepted = true;
                    break;
                }
            }
            factor *= 0.5;
        }
        if !accepted {
            return false;
        }
    }
    false
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = *a;
    let mut v = *b;
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        v.swap(col, pivot);
        let lead = m[col];
        for row in col + 1..3 {
            let f = m[row][col] / lead[col];
            for (cell, l) in m[row].iter_mut().zip(lead.iter()).skip(col) {
                *cell -= f * l;
            }
            v[row] -= f * v[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = v[row];
        for c in row + 1..3 {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Local search for step functions with moments `m` that push the ratio
/// `lhs / z` toward the proven ceiling `t^p`. Moment-preserving moves:
/// random perturbations of the piece values followed by a Newton projection
/// back onto the moment manifold, plus the descending rearrangement (an exact
/// moment-preserving move for equal-width pieces).
///
/// Informational: the returned gap is reported, never asserted against.
pub fn sharpness_probe(
    m: &MomentTriple,
    exps: &Exponents,
    budget: usize,
    seed: u64,
) -> Result<ProbeResult, Error> {
    let s = constant::moments_to_domain(m, exps)?;
    let r = bellman_t(&s, exps)?;
    let bound_ratio = r.t.powf(exps.p());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Initialize on the manifold from randomized profiles, escalating the
    // piece count when the equal-width family is too coarse for the moments.
    let base = m.x / m.kappa;
    let mut values = Vec::new();
    let mut widths = Vec::new();
    let mut interior = Vec::new();
    let mut initialized = false;
    'ladder: for n in PROBE_PIECE_LADDER {
        let mut sigma = 0.3;
        for attempt in 0..60 {
            let mut cand: Vec<f64> = (0..n)
                .map(|_| base * (sigma * rng.gen_range(-1.0f64..1.0)).exp())
                .collect();
            let w = vec![m.kappa / n as f64; n];
            if project_to_moments(&mut cand, &w, m, exps) {
                values = cand;
                widths = w;
                interior = (1..n).map(|i| m.kappa * i as f64 / n as f64).collect();
                initialized = true;
                break 'ladder;
            }
            if attempt % 6 == 5 {
                sigma = (sigma * 1.3).min(3.0);
            }
        }
    }
    if !initialized {
        return Err(Error::NoConvergence {
            iterations: 60 * PROBE_PIECE_LADDER.len(),
            lo: m.x,
            hi: m.z,
            f_lo: f64::NAN,
            f_hi: f64::NAN,
        });
    }

    let ratio_of = |values: &[f64]| -> Result<f64, Error> {
        let h = StepFunction::new(m.kappa, &interior, values)?;
        let (lhs, _) = avg_power_integral(&h, exps.p())?;
        Ok(lhs / m.z)
    };

    let mut evaluated = 0;
    let mut accepted = 0;
    let mut best_ratio = f64::NEG_INFINITY;
    let consider = |vals: &[f64], best: &mut f64, evaluated: &mut usize| -> bool {
        *evaluated += 1;
        match ratio_of(vals) {
            Ok(rho) if rho > *best => {
                *best = rho;
                true
            }
            _ => false,
        }
    };
    consider(&values, &mut best_ratio, &mut evaluated);
    // The descending rearrangement keeps all moments and never lowers the
    // running average, so the ratio from it is at least 1.
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    if consider(&sorted, &mut best_ratio, &mut evaluated) {
        values = sorted;
        accepted += 1;
    }

    let mut step = 0.2 * base;
    let mut stale = 0;
    for _ in 0..budget {
        let mut cand = values.clone();
        for v in cand.iter_mut() {
            *v = (*v + step * rng.gen_range(-1.0..1.0)).max(1e-12);
        }
        if !project_to_moments(&mut cand, &widths, m, exps) {
            step = (step * 0.7).max(1e-4 * base);
            continue;
        }
        let improved = consider(&cand, &mut best_ratio, &mut evaluated);
        let mut cand_sorted = cand.clone();
        cand_sorted.sort_by(|a, b| b.total_cmp(a));
        let improved_sorted = consider(&cand_sorted, &mut best_ratio, &mut evaluated);
        if improved_sorted {
            values = cand_sorted;
            accepted += 1;
            stale = 0;
        } else if improved {
            values = cand;
            accepted += 1;
            stale = 0;
        } else {
            stale += 1;
            if stale >= 10 {
                step = (step * 0.7).max(1e-4 * base);
                stale = 0;
            }
        }
    }

    Ok(ProbeResult {
        best_ratio,
        bound_ratio,
        gap: bound_ratio - best_ratio,
        accepted,
        evaluated,
    })
}
