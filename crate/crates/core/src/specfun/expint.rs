//! Generalized exponential integral `Eₙ(z) = ∫₁^∞ e^{−zt} t^{−n} dt`.
//!
//! The principal branch is cut along the negative real axis. Small or
//! left-half-plane arguments use the ascending series; elsewhere the
//! Legendre continued fraction evaluated by the modified Lentz method.

use super::{ensure_finite, SERIES_CAP, SERIES_EPS};
use crate::{Error, Result};
use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Bound on `|z| + Re z`, the logarithm of the cancellation factor the
/// ascending series suffers; beyond it the continued fraction is used.
const SERIES_CANCELLATION_LOG: f64 = 7.0;

/// `Eₙ(z)` on the principal branch.
pub fn expint_en(n: u32, z: Complex64) -> Result<Complex64> {
    let scaled = expint_en_scaled(n, z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(scaled);
    }
    ensure_finite("expint_en", scaled * (-z).exp())
}

/// `eᶻ·Eₙ(z)`, which stays of order `1/z` for large arguments and does
/// not overflow where `Eₙ` alone would underflow.
pub fn expint_en_scaled(n: u32, z: Complex64) -> Result<Complex64> {
    const NAME: &str = "expint_en";
    ensure_finite(NAME, z)?;
    if z == Complex64::new(0.0, 0.0) {
        return if n >= 2 {
            Ok(Complex64::new(1.0 / (n as f64 - 1.0), 0.0))
        } else {
            Err(Error::domain(NAME, format!("E_{n}(0) diverges")))
        };
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::domain(
            NAME,
            format!("argument {z} lies on the branch cut along the negative real axis"),
        ));
    }
    if n == 0 {
        return Ok(1.0 / z);
    }
    let r = z.norm();
    if r <= 1.0 || r + z.re <= SERIES_CANCELLATION_LOG {
        Ok(ascending_series(n, z)? * z.exp())
    } else {
        continued_fraction(n, z)
    }
}

fn digamma_integer(n: u32) -> f64 {
    -EULER_GAMMA + (1..n).map(|m| 1.0 / m as f64).sum::<f64>()
}

fn ascending_series(n: u32, z: Complex64) -> Result<Complex64> {
    let nm1 = (n - 1) as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0); // (−z)^k / k!
    let mut special = Complex64::new(0.0, 0.0);
    for k in 0..SERIES_CAP {
        if k == nm1 {
            special = power * (digamma_integer(n) - z.ln());
        } else {
            let term = -power / (k as f64 - nm1 as f64);
            sum += term;
            if k > nm1 && k as f64 > z.norm() && term.norm() < SERIES_EPS * sum.norm() {
                return Ok(sum + special);
            }
        }
        power *= -z / (k as f64 + 1.0);
    }
    Err(Error::NonConvergence {
        function: "expint_en",
        iterations: SERIES_CAP,
        residual: power.norm(),
    })
}

fn continued_fraction(n: u32, z: Complex64) -> Result<Complex64> {
    let tiny = 1e-300;
    let nf = n as f64;
    let mut b = z + nf;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..SERIES_CAP {
        let fi = i as f64;
        let an = -fi * (nf - 1.0 + fi);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = 1.0 / d;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).norm() < SERIES_EPS {
            return ensure_finite("expint_en", h);
        }
    }
    Err(Error::NonConvergence {
        function: "expint_en",
        iterations: SERIES_CAP,
        residual: h.norm(),
    })
}
