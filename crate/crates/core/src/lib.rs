//! Sharp constant for the Hardy-type averaging bound under moment
//! constraints, with a verification harness for its monotonicity structure.
//!
//! For exponents `1 < q < p` and admissible parameters `(s1, s2)`, the crate
//! computes the implicitly defined constant `t(s1, s2)` that makes
//!
//! ```text
//! int_0^kappa ((1/u) int_0^u h)^p du  <=  t^p(s1, s2) * int_0^kappa h^p
//! ```
//!
//! hold for every nonnegative `h` with prescribed first, q-th, and p-th
//! moments (which determine `s1` and `s2`). Alongside the constant itself,
//! the crate verifies numerically the structure the constant is known to
//! have: a single maximum of `t(s1, .)` at `s2' = H_q(omega_p(s1))` with
//! value `omega_p(s1)`, sign conditions of the auxiliary quantities, the
//! monotonicity of the comparison functions `A` and `F`, and the inequality
//! itself on randomized step functions.
//!
//! Grid scans and Monte Carlo trials run data-parallel through rayon by
//! default; build with `--no-default-features` for a sequential core.

pub mod analysis;
pub mod constant;
pub mod error;
pub mod hardy;
pub mod kernel;

mod par;
mod quad;
mod root;

pub use error::Error;
pub use kernel::Exponents;
