//! Complex special functions used by the analytic spectra.
//!
//! Every function is a pure function of its arguments. Series and
//! iterations carry explicit caps and report [`Error::NonConvergence`]
//! instead of returning a silently inaccurate value.
//!
//! [`Error::NonConvergence`]: crate::Error::NonConvergence

mod elliptic;
mod expint;
mod gamma;
mod hypergeometric;
mod lambert;
mod laguerre;

pub use elliptic::{elliptic_k, elliptic_k_complement, ASYMPTOTIC_THRESHOLD};
pub use expint::{expint_en, expint_en_scaled};
pub use gamma::{gamma, ln_gamma};
pub use hypergeometric::{hyp1f1, kummer_u};
pub use lambert::{lambert_w, lambert_w_exp};
pub use laguerre::laguerre;

use num_complex::Complex64;

/// Complex scalar carried through every analytic expression.
pub type ComplexScalar = Complex64;

/// Relative size below which a series term is considered negligible.
pub(crate) const SERIES_EPS: f64 = 1e-15;

/// Upper bound on the number of terms of any series.
pub(crate) const SERIES_CAP: usize = 10_000;

pub(crate) fn ensure_finite(function: &'static str, z: Complex64) -> crate::Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(crate::Error::domain(function, format!("non-finite value {z}")))
    }
}
