//! Lambert W function on all branches.
//!
//! Branch numbering and cut placement follow Corless et al. (1996): branch
//! `k` is continuous with the upper half plane along its cut, so a negative
//! real argument is read as `x + i0`.

use super::ensure_finite;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{E, PI};

const MAX_ITER: usize = 100;

/// Logarithm magnitude above which `w·eʷ` would overflow and the
/// logarithmic form `w + ln w = ln z + 2πik` is used instead.
const LOG_FORM_THRESHOLD: f64 = 600.0;

/// Branch `branch` of the Lambert W function, the solution of `w·eʷ = z`.
///
/// Branch 0 is real on `[-1/e, ∞)` and branch −1 is real on `[-1/e, 0)`.
pub fn lambert_w(branch: i64, z: Complex64) -> Result<Complex64> {
    const NAME: &str = "lambert_w";
    ensure_finite(NAME, z)?;
    if z == Complex64::new(0.0, 0.0) {
        return if branch == 0 {
            Ok(z)
        } else {
            Err(Error::domain(NAME, format!("branch {branch} diverges at z = 0")))
        };
    }
    let branch_point = Complex64::new(-1.0 / E, 0.0);
    if (z - branch_point).norm() < 1e-300 && (branch == 0 || branch == -1) {
        return Ok(Complex64::new(-1.0, 0.0));
    }

    let mut w = initial_guess(branch, z);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        residual = f.norm();
        let wp1 = w + 1.0;
        if wp1.norm() < 1e-300 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom.norm() == 0.0 {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.norm() <= 4.0 * f64::EPSILON * w.norm().max(1.0) {
            residual = (w * w.exp() - z).norm();
            break;
        }
    }
    let tolerance = 1e-12 * z.norm().max(1.0);
    if residual <= tolerance {
        ensure_finite(NAME, w)
    } else {
        Err(Error::NonConvergence {
            function: NAME,
            iterations: MAX_ITER,
            residual,
        })
    }
}

/// Branch `branch` of W evaluated at `z = exp(ln_z)`.
///
/// The imaginary part of `ln_z` selects the side of the cut, so
/// `ln_z = ln x + iπ` denotes the negative real number `-x` approached
/// from above. Arguments whose magnitude would overflow a double are
/// handled through the logarithmic form `w + ln w = ln z + 2πik`.
pub fn lambert_w_exp(branch: i64, ln_z: Complex64) -> Result<Complex64> {
    const NAME: &str = "lambert_w_exp";
    ensure_finite(NAME, ln_z)?;
    if ln_z.re < LOG_FORM_THRESHOLD {
        let z = Complex64::from_polar(ln_z.re.exp(), ln_z.im);
        return lambert_w(branch, z);
    }
    let target = ln_z + Complex64::new(0.0, 2.0 * PI * branch as f64);
    let lt = target.ln();
    let mut w = target - lt + lt / target;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let f = w + w.ln() - target;
        residual = f.norm();
        let step = f * w / (w + 1.0);
        w -= step;
        if step.norm() <= 4.0 * f64::EPSILON * w.norm() {
            residual = (w + w.ln() - target).norm();
            break;
        }
    }
    if residual <= 1e-12 * target.norm() {
        ensure_finite(NAME, w)
    } else {
        Err(Error::NonConvergence {
            function: NAME,
            iterations: MAX_ITER,
            residual,
        })
    }
}

fn branch_point_series(p: Complex64) -> Complex64 {
    -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
}

fn initial_guess(branch: i64, z: Complex64) -> Complex64 {
    let near = E * z + 1.0;
    if near.norm() < 0.3 {
        let p = (2.0 * near).sqrt();
        match branch {
            0 => return branch_point_series(p),
            -1 if z.im >= 0.0 => return branch_point_series(-p),
            1 if z.im < 0.0 => return branch_point_series(-p),
            _ => {}
        }
    }
    if branch == 0 {
        if z.norm() <= 0.5 {
            return z * (1.0 - z);
        }
        if z.norm() < 3.0 {
            return if z.re >= 0.0 {
                (1.0 + z).ln()
            } else {
                branch_point_series((2.0 * near).sqrt())
            };
        }
    }
    let l1 = z.ln() + Complex64::new(0.0, 2.0 * PI * branch as f64);
    let l2 = l1.ln();
    l1 - l2 + l2 / l1
}
