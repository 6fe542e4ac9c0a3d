//! Elementary functions the constant is built from: the decreasing power map
//! `H_r`, its inverse `omega_r` on `[1, r/(r-1)]`, and the derived quantities
//! `alpha`, `A`, `F` together with their gamma-parametrized forms.
//!
//! Everything here is a pure function of its inputs. Formulas with an
//! `omega - 1` denominator raise [`Error::Singular`] once the denominator
//! falls below [`SINGULARITY_GUARD`] instead of returning huge values.

use crate::error::Error;
use crate::root;

/// Minimal separation enforced between the two exponents.
pub const EPS_SEP: f64 = 1e-6;
/// Residual target when inverting `H_r`.
pub const ROOT_TOL: f64 = 1e-12;
/// Relative bracket-width target for the inversion.
pub const BRACKET_TOL: f64 = 1e-13;
/// Threshold under which an `omega - 1` denominator counts as singular.
pub const SINGULARITY_GUARD: f64 = 1e-10;

/// The exponent pair `1 < q < p` that parametrizes every formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    p: f64,
    q: f64,
}

impl Exponents {
    pub fn new(p: f64, q: f64) -> Result<Self, Error> {
        if !p.is_finite() || !q.is_finite() {
            return Err(Error::domain("exponents must be finite"));
        }
        if q <= 1.0 {
            return Err(Error::domain(format!("q = {q} must exceed 1")));
        }
        if p - q < EPS_SEP {
            return Err(Error::domain(format!(
                "p - q = {} must be at least {EPS_SEP}",
                p - q
            )));
        }
        Ok(Exponents { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Interval on which `H_r` is strictly decreasing from 1 to 0, i.e. the range
/// of its inverse branch.
#[derive(Debug, Clone, Copy)]
pub struct OmegaRange {
    pub r: f64,
    pub lo: f64,
    pub hi: f64,
}

impl OmegaRange {
    pub fn new(r: f64) -> Result<Self, Error> {
        if !r.is_finite() || r <= 1.0 {
            return Err(Error::domain(format!("exponent r = {r} must exceed 1")));
        }
        Ok(OmegaRange { r, lo: 1.0, hi: r / (r - 1.0) })
    }

    pub fn contains(&self, z: f64) -> bool {
        z >= self.lo && z <= self.hi
    }
}

/// `H_r(z) = r z^{r-1} - (r-1) z^r`, evaluated in the factored form
/// `z^{r-1} (r - (r-1) z)` which stays accurate near the upper zero.
pub fn h(z: f64, r: f64) -> Result<f64, Error> {
    OmegaRange::new(r)?;
    if !z.is_finite() {
        return Err(Error::domain(format!("H_r argument z = {z} must be finite")));
    }
    if z < 0.0 {
        return Err(Error::domain(format!("H_r argument z = {z} must be >= 0")));
    }
    Ok(z.powf(r - 1.0) * (r - (r - 1.0) * z))
}

/// Inverse of `H_r` on `[1, r/(r-1)]`: the unique `z` there with `H_r(z) = s`.
pub fn omega(s: f64, r: f64) -> Result<f64, Error> {
    let range = OmegaRange::new(r)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain(format!("omega argument s = {s} must lie in [0, 1]")));
    }
    if s == 1.0 {
        return Ok(range.lo);
    }
    if s == 0.0 {
        return Ok(range.hi);
    }
    // H is strictly decreasing on the bracket: H(lo) - s = 1 - s > 0,
    // H(hi) - s = -s < 0.
    let f = |z: f64| z.powf(r - 1.0) * (r - (r - 1.0) * z) - s;
    let sol = root::bisect_secant(f, range.lo, range.hi, BRACKET_TOL, ROOT_TOL, 400)?;
    Ok(sol.root)
}

/// `alpha(s2) = omega_q(s2)^q / s2 - 1`; positive on (0, 1), vanishing at 1.
pub fn alpha(s2: f64, q: f64) -> Result<f64, Error> {
    if !(s2 > 0.0 && s2 < 1.0) {
        return Err(Error::domain(format!("alpha argument s2 = {s2} must lie in (0, 1)")));
    }
    let w = omega(s2, q)?;
    Ok(w.powf(q) / s2 - 1.0)
}

/// Derivative of `alpha`:
/// `(1/s2) [ -omega/((q-1)(omega-1)) - omega^q/s2 ]`. Strictly negative.
pub fn alpha_prime(s2: f64, q: f64) -> Result<f64, Error> {
    if !(s2 > 0.0 && s2 < 1.0) {
        return Err(Error::domain(format!(
            "alpha_prime argument s2 = {s2} must lie in (0, 1)"
        )));
    }
    let w = omega(s2, q)?;
    if w - 1.0 < SINGULARITY_GUARD {
        return Err(Error::Singular {
            what: "omega_q(s2) - 1 in alpha_prime",
            value: w - 1.0,
            guard: SINGULARITY_GUARD,
        });
    }
    Ok((-w / ((q - 1.0) * (w - 1.0)) - w.powf(q) / s2) / s2)
}

/// `A(s2) = s2 ( omega/((q-1)(omega-1)) + omega^q/s2 )`. Strictly increasing
/// on (0, 1); equals `-s2^2 alpha'(s2)`.
pub fn a_of_s2(s2: f64, q: f64) -> Result<f64, Error> {
    if !(s2 > 0.0 && s2 < 1.0) {
        return Err(Error::domain(format!("A argument s2 = {s2} must lie in (0, 1)")));
    }
    let w = omega(s2, q)?;
    if w - 1.0 < SINGULARITY_GUARD {
        return Err(Error::Singular {
            what: "omega_q(s2) - 1 in A(s2)",
            value: w - 1.0,
            guard: SINGULARITY_GUARD,
        });
    }
    Ok(s2 * w / ((q - 1.0) * (w - 1.0)) + w.powf(q))
}

/// `F(tau) = tau/(1-omega) (p - q(p-1)/(q-1) omega)
///           - q (p omega^{q-1} - (p-1) omega^q)` with `omega = omega_q(tau)`.
/// Strictly increasing on (0, 1), diverging as `tau -> 1`.
pub fn f_of_tau(tau: f64, exps: &Exponents) -> Result<f64, Error> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::domain(format!("F argument tau = {tau} must lie in (0, 1)")));
    }
    let (p, q) = (exps.p, exps.q);
    let w = omega(tau, q)?;
    if w - 1.0 < SINGULARITY_GUARD {
        return Err(Error::Singular {
            what: "omega_q(tau) - 1 in F(tau)",
            value: w - 1.0,
            guard: SINGULARITY_GUARD,
        });
    }
    let first = tau / (1.0 - w) * (p - q * (p - 1.0) / (q - 1.0) * w);
    let second = q * (p * w.powf(q - 1.0) - (p - 1.0) * w.powf(q));
    Ok(first - second)
}

fn check_gamma_arg(gamma: f64, q: f64, what: &'static str) -> Result<(), Error> {
    let range = OmegaRange::new(q)?;
    if !gamma.is_finite() || gamma <= range.lo || gamma >= range.hi {
        return Err(Error::domain(format!(
            "gamma = {gamma} must lie strictly inside (1, {})",
            range.hi
        )));
    }
    if gamma - 1.0 < SINGULARITY_GUARD {
        return Err(Error::Singular { what, value: gamma - 1.0, guard: SINGULARITY_GUARD });
    }
    Ok(())
}

/// `A1(gamma) = H_q(gamma) gamma / ((q-1)(gamma-1)) + gamma^q`, the
/// reparametrization of `A` by `gamma = omega_q(s2)`. Strictly decreasing.
pub fn a1_of_gamma(gamma: f64, q: f64) -> Result<f64, Error> {
    check_gamma_arg(gamma, q, "gamma - 1 in A1")?;
    Ok(h(gamma, q)? * gamma / ((q - 1.0) * (gamma - 1.0)) + gamma.powf(q))
}

/// Derivative of `A1`, as the explicit three-term sum. Strictly negative on
/// `(1, q/(q-1))`.
pub fn a1_prime_of_gamma(gamma: f64, q: f64) -> Result<f64, Error> {
    check_gamma_arg(gamma, q, "gamma - 1 in A1'")?;
    let t1 = q * gamma.powf(q - 1.0);
    let t2 = q * (q - 1.0) * gamma.powf(q - 2.0) * (1.0 - gamma) * gamma
        / ((q - 1.0) * (gamma - 1.0));
    let t3 = (q * gamma.powf(q - 1.0) - (q - 1.0) * gamma.powf(q)) / (q - 1.0)
        * (-1.0 / ((gamma - 1.0) * (gamma - 1.0)));
    Ok(t1 + t2 + t3)
}

/// `F1(gamma) = H_q(gamma)/(1-gamma) (p - q(p-1) gamma/(q-1))
///              - q (p gamma^{q-1} - (p-1) gamma^q)`, the reparametrization of
/// `F` by `gamma = omega_q(tau)`. Strictly decreasing.
pub fn f1_of_gamma(gamma: f64, exps: &Exponents) -> Result<f64, Error> {
    let (p, q) = (exps.p, exps.q);
    check_gamma_arg(gamma, q, "gamma - 1 in F1")?;
    let first = h(gamma, q)? / (1.0 - gamma) * (p - q * (p - 1.0) / (q - 1.0) * gamma);
    let second = q * (p * gamma.powf(q - 1.0) - (p - 1.0) * gamma.powf(q));
    Ok(first - second)
}
