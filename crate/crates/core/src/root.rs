//! Bracketed root finding.
//!
//! Two solvers: bisection refined by a safeguarded secant step (fast path for
//! smooth monotone functions) and plain bisection (for functions whose
//! smoothness near the root is delicate). Both demand a sign change on the
//! initial bracket and keep it throughout.

use crate::error::Error;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Root {
    pub root: f64,
    pub residual: f64,
    #[allow(dead_code)]
    pub iterations: usize,
}

fn check_bracket(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Option<Root>, Error> {
    if !(lo.is_finite() && hi.is_finite() && f_lo.is_finite() && f_hi.is_finite()) || lo >= hi {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    if f_lo == 0.0 {
        return Ok(Some(Root { root: lo, residual: 0.0, iterations: 0 }));
    }
    if f_hi == 0.0 {
        return Ok(Some(Root { root: hi, residual: 0.0, iterations: 0 }));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    Ok(None)
}

/// Bisection with a secant candidate each even iteration. The secant step is
/// only taken when it lands strictly inside the current bracket; odd
/// iterations always bisect, so the bracket width at least halves every two
/// iterations.
///
/// Converges when the bracket width drops below `x_tol_rel * max(1, |x|)` or
/// the residual below `f_tol`.
pub(crate) fn bisect_secant<F>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    x_tol_rel: f64,
    f_tol: f64,
    max_iter: usize,
) -> Result<Root, Error>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if let Some(done) = check_bracket(lo, hi, f_lo, f_hi)? {
        return Ok(done);
    }

    let mut best = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    for iter in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let mut x = mid;
        if iter % 2 == 0 && f_hi != f_lo {
            let sec = lo - f_lo * (hi - lo) / (f_hi - f_lo);
            if sec.is_finite() && sec > lo && sec < hi {
                x = sec;
            }
        }
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NoConvergence { iterations: iter, lo, hi, f_lo, f_hi });
        }
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 || fx.abs() <= f_tol {
            return Ok(Root { root: x, residual: fx.abs(), iterations: iter + 1 });
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if hi - lo <= x_tol_rel * best.0.abs().max(1.0) {
            return Ok(Root { root: best.0, residual: best.1.abs(), iterations: iter + 1 });
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, lo, hi, f_lo, f_hi })
}

/// Plain bisection on a fallible function. Stops on bracket width alone; the
/// returned residual is the smallest |f| seen.
pub(crate) fn bisect_fallible<F>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    f_lo_given: f64,
    f_hi_given: f64,
    x_tol_rel: f64,
    max_iter: usize,
) -> Result<Root, Error>
where
    F: Fn(f64) -> Result<f64, Error>,
{
    let mut f_lo = f_lo_given;
    let f_hi = f_hi_given;
    if let Some(done) = check_bracket(lo, hi, f_lo, f_hi)? {
        return Ok(done);
    }

    let mut best = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    for iter in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if !fm.is_finite() {
            return Err(Error::NoConvergence { iterations: iter, lo, hi, f_lo, f_hi });
        }
        if fm.abs() < best.1.abs() {
            best = (mid, fm);
        }
        if fm == 0.0 {
            return Ok(Root { root: mid, residual: 0.0, iterations: iter + 1 });
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= x_tol_rel * mid.abs().max(1.0) {
            return Ok(Root { root: best.0, residual: best.1.abs(), iterations: iter + 1 });
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, lo, hi, f_lo, f_hi })
}
