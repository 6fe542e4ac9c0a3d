//! Adaptive Gauss–Legendre quadrature with interval halving.
//!
//! The integrands here are smooth inside each step-function piece (kinks only
//! at piece boundaries, which callers split on), so a fixed 15-node rule with
//! recursive halving converges very quickly.

use crate::error::Error;
use std::sync::OnceLock;

const N: usize = 15;
const MAX_DEPTH: usize = 40;

/// Legendre polynomial P_n and derivative at x, by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let d = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn nodes_weights() -> &'static ([f64; N], [f64; N]) {
    static NW: OnceLock<([f64; N], [f64; N])> = OnceLock::new();
    NW.get_or_init(|| {
        let mut nodes = [0.0; N];
        let mut weights = [0.0; N];
        for i in 0..N {
            // Newton from the Chebyshev-like initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(N, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(N, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * d * d);
        }
        (nodes, weights)
    })
}

fn gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = nodes_weights();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..N {
        acc += weights[i] * f(mid + half * nodes[i]);
    }
    acc * half
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<(f64, f64), Error> {
    let mid = 0.5 * (a + b);
    let left = gauss(f, a, mid);
    let right = gauss(f, mid, b);
    let err = (left + right - whole).abs();
    if err <= tol || b - a <= f64::EPSILON * a.abs().max(b.abs()) {
        return Ok((left + right, err));
    }
    if depth == 0 {
        return Err(Error::Quadrature { lo: a, hi: b, tol });
    }
    let (vl, el) = refine(f, a, mid, left, 0.5 * tol, depth - 1)?;
    let (vr, er) = refine(f, mid, b, right, 0.5 * tol, depth - 1)?;
    Ok((vl + vr, el + er))
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol`. Returns the
/// value and an error estimate.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<(f64, f64), Error> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let first = gauss(f, a, b);
    refine(f, a, b, first, abs_tol, MAX_DEPTH)
}
