//! The admissible parameter domain, the moment mapping, and the implicitly
//! defined constant `t(s1, s2)` with its auxiliary quantities.
//!
//! The constant is defined case-wise. Let `Phi(t) = Gamma(s, t) - Delta(s)`
//! and `t0` the root of the endpoint equation. If `Phi` changes sign on
//! `[1, t0]`, `t` is the root of `Phi` there (case A); otherwise `t = t0`
//! (case B). A useful identity drives the endpoint handling: at `t = t0` the
//! ratio `tau` equals 1 exactly, so `Gamma(t0)` reduces to
//! `q (t0^{p-q} - s1/s2)` without inverting `H_q` at its flat end.

use crate::error::Error;
use crate::kernel::{self, Exponents};
use crate::root;

/// Relative bracket width at which the bisection for `t` stops.
pub const T_BRACKET_TOL: f64 = 1e-13;
/// Width of the tie window in `tau` above 1 that is treated as the endpoint
/// limit rather than an out-of-range error.
const TAU_ENDPOINT_TIE: f64 = 1e-9;

/// A validated point of the admissible region: `0 < s1`,
/// `s1^{(q-1)/(p-1)} <= s2 < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainPoint {
    s1: f64,
    s2: f64,
}

impl DomainPoint {
    pub fn new(s1: f64, s2: f64, exps: &Exponents) -> Result<Self, Error> {
        check_domain(s1, s2, exps)?;
        Ok(DomainPoint { s1, s2 })
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    /// Smallest admissible `s2` for a given `s1`: `s1^{(q-1)/(p-1)}`.
    pub fn lower_envelope(s1: f64, exps: &Exponents) -> f64 {
        s1.powf((exps.q() - 1.0) / (exps.p() - 1.0))
    }
}

/// Checks the domain constraints, naming the violated one on failure.
pub fn check_domain(s1: f64, s2: f64, exps: &Exponents) -> Result<(), Error> {
    if !s1.is_finite() || !s2.is_finite() {
        return Err(Error::domain(format!("(s1, s2) = ({s1}, {s2}) must be finite")));
    }
    if s1 <= 0.0 {
        return Err(Error::domain(format!("s1 = {s1} violates 0 < s1")));
    }
    if s2 >= 1.0 {
        return Err(Error::domain(format!("s2 = {s2} violates s2 < 1")));
    }
    let envelope = DomainPoint::lower_envelope(s1, exps);
    if s2 < envelope {
        return Err(Error::domain(format!(
            "s2 = {s2} violates s1^((q-1)/(p-1)) <= s2 (envelope {envelope})"
        )));
    }
    Ok(())
}

/// True iff `(s1, s2)` lies in the admissible region.
pub fn in_domain(s1: f64, s2: f64, exps: &Exponents) -> bool {
    check_domain(s1, s2, exps).is_ok()
}

/// Integral data of a test function on an interval of measure `kappa`:
/// `x` the integral, `y` the q-th moment, `z` the p-th moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub kappa: f64,
}

impl MomentTriple {
    /// Checks the admissibility window, naming the failed inequality.
    pub fn validate(&self, exps: &Exponents) -> Result<(), Error> {
        let (p, q) = (exps.p(), exps.q());
        let MomentTriple { x, y, z, kappa } = *self;
        for (name, v) in [("x", x), ("y", y), ("z", z), ("kappa", kappa)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("moment {name} = {v} must be positive")));
            }
        }
        let z_lower = x.powf(p) / kappa.powf(p - 1.0);
        if z <= z_lower {
            return Err(Error::domain(format!(
                "z = {z} violates x^p / kappa^(p-1) < z (lower bound {z_lower})"
            )));
        }
        let y_lower = x.powf(q) / kappa.powf(q - 1.0);
        if y <= y_lower {
            return Err(Error::domain(format!(
                "y = {y} violates x^q / kappa^(q-1) < y (lower bound {y_lower})"
            )));
        }
        let y_upper = x.powf((p - q) / (p - 1.0)) * z.powf((q - 1.0) / (p - 1.0));
        if y > y_upper {
            return Err(Error::domain(format!(
                "y = {y} violates y <= x^((p-q)/(p-1)) z^((q-1)/(p-1)) (upper bound {y_upper})"
            )));
        }
        Ok(())
    }
}

/// Maps a moment triple to the admissible region:
/// `s1 = x^p / (kappa^{p-1} z)`, `s2 = x^q / (kappa^{q-1} y)`.
pub fn moments_to_domain(m: &MomentTriple, exps: &Exponents) -> Result<DomainPoint, Error> {
    m.validate(exps)?;
    let (p, q) = (exps.p(), exps.q());
    let s1 = m.x.powf(p) / (m.kappa.powf(p - 1.0) * m.z);
    let mut s2 = m.x.powf(q) / (m.kappa.powf(q - 1.0) * m.y);
    // When y sits exactly on its upper bound, rounding can push the computed
    // s2 a few ulps below the envelope; snap it back.
    let envelope = DomainPoint::lower_envelope(s1, exps);
    if s2 < envelope && envelope - s2 <= 1e-13 * envelope {
        s2 = envelope;
    }
    DomainPoint::new(s1, s2, exps)
}

/// `tau(s, t) = (p-q)/p * (t^p - s1) / (t^{p-q} - s1/s2)`; strictly
/// increasing in `t` on `[1, inf)`, equal to 1 exactly at `t = t0`.
pub fn tau(s: &DomainPoint, t: f64, exps: &Exponents) -> Result<f64, Error> {
    let (p, q) = (exps.p(), exps.q());
    let denom = t.powf(p - q) - s.s1 / s.s2;
    if denom <= 0.0 {
        return Err(Error::domain(format!(
            "tau denominator t^(p-q) - s1/s2 = {denom} must be positive (t = {t})"
        )));
    }
    Ok((p - q) / p * (t.powf(p) - s.s1) / denom)
}

/// `tau(s, t) - t^q` rewritten over the common denominator:
/// `(p (s1/s2) t^q - q t^p - (p-q) s1) / (p (t^{p-q} - s1/s2))`.
pub fn tau_minus_t_pow_q(s: &DomainPoint, t: f64, exps: &Exponents) -> Result<f64, Error> {
    let (p, q) = (exps.p(), exps.q());
    let denom = t.powf(p - q) - s.s1 / s.s2;
    if denom <= 0.0 {
        return Err(Error::domain(format!(
            "tau denominator t^(p-q) - s1/s2 = {denom} must be positive (t = {t})"
        )));
    }
    let numer = p * (s.s1 / s.s2) * t.powf(q) - q * t.powf(p) - (p - q) * s.s1;
    Ok(numer / (p * denom))
}

/// The endpoint equation residual `G(t) = t^p - (p/(p-q)) t^{p-q} - rhs`,
/// nondecreasing on `[1, inf)`.
fn g_endpoint(t: f64, s: &DomainPoint, exps: &Exponents) -> f64 {
    let (p, q) = (exps.p(), exps.q());
    let c = p / (p - q);
    let rhs = s.s1 - c * s.s1 / s.s2;
    t.powf(p) - c * t.powf(p - q) - rhs
}

/// The unique root `t0 >= 1` of `t^p - (p/(p-q)) t^{p-q} =
/// s1 - (p/(p-q)) s1/s2`. `G(1) < 0` holds everywhere on the domain, so the
/// root exists; `G(1) >= 0` signals a validation bug upstream.
pub fn t_zero(s: &DomainPoint, exps: &Exponents) -> Result<f64, Error> {
    let g1 = g_endpoint(1.0, s, exps);
    if g1 >= 0.0 {
        return Err(Error::Inconsistent(format!(
            "G(1) = {g1} >= 0 at (s1, s2) = ({}, {})",
            s.s1, s.s2
        )));
    }
    let mut hi = (exps.p() / (exps.p() - 1.0)).max(2.0);
    let mut g_hi = g_endpoint(hi, s, exps);
    let mut grow = 0;
    while g_hi < 0.0 {
        hi *= 2.0;
        g_hi = g_endpoint(hi, s, exps);
        grow += 1;
        if grow > 200 {
            return Err(Error::NoBracket { lo: 1.0, hi, f_lo: g1, f_hi: g_hi });
        }
    }
    let c = exps.p() / (exps.p() - exps.q());
    let rhs = s.s1 - c * s.s1 / s.s2;
    let f_tol = 1e-12 * rhs.abs().max(1.0);
    let sol = root::bisect_secant(|t| g_endpoint(t, s, exps), 1.0, hi, T_BRACKET_TOL, f_tol, 400)?;
    Ok(sol.root)
}

/// `Gamma(s, t) = q (p omega^{q-1} - (p-1) omega^q)(t^{p-q} - s1/s2)` with
/// `omega = omega_q(tau(s, t))`. Requires `tau` in (0, 1).
pub fn gamma_fn(s: &DomainPoint, t: f64, exps: &Exponents) -> Result<f64, Error> {
    let tv = tau(s, t, exps)?;
    if !(tv > 0.0 && tv < 1.0) {
        return Err(Error::TauOutOfRange { t, tau: tv });
    }
    gamma_at_tau(s, t, tv, exps)
}

fn gamma_at_tau(s: &DomainPoint, t: f64, tv: f64, exps: &Exponents) -> Result<f64, Error> {
    let (p, q) = (exps.p(), exps.q());
    let w = kernel::omega(tv, q)?;
    let inner = p * w.powf(q - 1.0) - (p - 1.0) * w.powf(q);
    Ok(q * inner * (t.powf(p - q) - s.s1 / s.s2))
}

/// `Delta(s) = (p - q) s1 alpha(s2)`; positive on the domain.
pub fn delta_fn(s: &DomainPoint, exps: &Exponents) -> Result<f64, Error> {
    let (p, q) = (exps.p(), exps.q());
    Ok((p - q) * s.s1 * kernel::alpha(s.s2, q)?)
}

/// Which branch of the definition produced `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// `t` solves `Gamma = Delta` inside `[1, t0]`.
    A,
    /// No sign change of `Gamma - Delta` on `[1, t0]`; `t = t0`.
    B,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Case::A => write!(f, "A"),
            Case::B => write!(f, "B"),
        }
    }
}

/// The computed constant together with its diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct BellmanResult {
    /// The constant itself; `1 <= t <= min(t0, omega_p(s1))`.
    pub t: f64,
    pub case: Case,
    /// Root of the endpoint equation, the upper end of the search bracket.
    pub t0: f64,
    /// `tau` at the solution; only meaningful in case A (it is exactly 1 at
    /// `t0`, where the case-A machinery degenerates).
    pub tau: Option<f64>,
    /// `|Gamma - Delta|` at `t` in case A; `|G(t0)|` in case B.
    pub residual: f64,
    /// Sign witness, positive on the domain. Diverges to +inf as `t -> t0`,
    /// so case B reports `f64::INFINITY`.
    pub delta1: f64,
    /// Sign witness, negative on the domain.
    pub e1: f64,
}

/// Evaluates `Phi(t) = Gamma - Delta` tolerating `tau` within a rounding tie
/// of 1 (which happens only against the `t0` endpoint, where the limit form
/// `omega = 1` applies).
fn phi_eval(s: &DomainPoint, t: f64, delta: f64, exps: &Exponents) -> Result<f64, Error> {
    let tv = tau(s, t, exps)?;
    if tv <= 0.0 {
        return Err(Error::TauOutOfRange { t, tau: tv });
    }
    if tv < 1.0 {
        return Ok(gamma_at_tau(s, t, tv, exps)? - delta);
    }
    if tv <= 1.0 + TAU_ENDPOINT_TIE {
        let (p, q) = (exps.p(), exps.q());
        return Ok(q * (t.powf(p - q) - s.s1 / s.s2) - delta);
    }
    Err(Error::TauOutOfRange { t, tau: tv })
}

/// Computes the constant `t(s1, s2)`.
pub fn bellman_t(s: &DomainPoint, exps: &Exponents) -> Result<BellmanResult, Error> {
    let (p, q) = (exps.p(), exps.q());
    let t0 = t_zero(s, exps)?;

    let tau1 = tau(s, 1.0, exps)?;
    if tau1 >= 1.0 {
        return Err(Error::OutsideAnalyzableRegion { tau: tau1 });
    }
    let delta = delta_fn(s, exps)?;
    let phi1 = phi_eval(s, 1.0, delta, exps)?;
    // tau(t0) = 1 exactly, where the inner factor reduces to 1.
    let phi_t0 = q * (t0.powf(p - q) - s.s1 / s.s2) - delta;

    if phi1 * phi_t0 <= 0.0 {
        let sol = root::bisect_fallible(
            |t| phi_eval(s, t, delta, exps),
            1.0,
            t0,
            phi1,
            phi_t0,
            T_BRACKET_TOL,
            400,
        )?;
        let t = sol.root;
        let tau_star = tau(s, t, exps)?;
        let delta1_val = if tau_star < 1.0 {
            delta1(s, t, exps).unwrap_or(f64::INFINITY)
        } else {
            f64::INFINITY
        };
        Ok(BellmanResult {
            t,
            case: Case::A,
            t0,
            tau: Some(tau_star),
            residual: sol.residual,
            delta1: delta1_val,
            e1: e1(s, t, exps),
        })
    } else {
        Ok(BellmanResult {
            t: t0,
            case: Case::B,
            t0,
            tau: None,
            residual: g_endpoint(t0, s, exps).abs(),
            // delta1 diverges to +inf as tau -> 1, i.e. at t0 itself.
            delta1: f64::INFINITY,
            e1: e1(s, t0, exps),
        })
    }
}

/// `Delta_1 = q (p - (p-1) omega) omega^{q-1}
///            + (p - q(p-1)/(q-1) omega) (tau - t^q)/(omega - 1)`
/// with `omega = omega_q(tau(s, t))`. Positive on the domain.
pub fn delta1(s: &DomainPoint, t: f64, exps: &Exponents) -> Result<f64, Error> {
    let (p, q) = (exps.p(), exps.q());
    let tv = tau(s, t, exps)?;
    if !(tv > 0.0 && tv < 1.0) {
        return Err(Error::TauOutOfRange { t, tau: tv });
    }
    let w = kernel::omega(tv, q)?;
    if w - 1.0 < kernel::SINGULARITY_GUARD {
        return Err(Error::Singular {
            what: "omega_q(tau) - 1 in Delta_1",
            value: w - 1.0,
            guard: kernel::SINGULARITY_GUARD,
        });
    }
    let shift = tau_minus_t_pow_q(s, t, exps)?;
    let first = q * (p - (p - 1.0) * w) * w.powf(q - 1.0);
    let second = (p - q * (p - 1.0) / (q - 1.0) * w) * shift / (w - 1.0);
    Ok(first + second)
}

/// `E_1 = p (s1/s2) t^q - q t^p - (p-q) s1`. Negative on the domain for
/// `t` in `[1, p/(p-1))`.
pub fn e1(s: &DomainPoint, t: f64, exps: &Exponents) -> f64 {
    let (p, q) = (exps.p(), exps.q());
    p * (s.s1 / s.s2) * t.powf(q) - q * t.powf(p) - (p - q) * s.s1
}
