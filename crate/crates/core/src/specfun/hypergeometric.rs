//! Confluent hypergeometric functions `₁F₁(a; b; z)` and `U(a, b, z)`.

use super::{ensure_finite, gamma::ln_gamma, SERIES_CAP, SERIES_EPS};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Smallest `|z|` at which the asymptotic expansion of `U` is attempted.
const U_ASYMPTOTIC_RADIUS: f64 = 25.0;

fn is_nonpositive_integer(b: Complex64) -> bool {
    b.im == 0.0 && b.re <= 0.0 && b.re.fract() == 0.0
}

/// Kummer's confluent hypergeometric function `₁F₁(a; b; z) = Σ (a)ₖ/(b)ₖ zᵏ/k!`.
///
/// For `Re z < 0` the series is also summed after Kummer's transformation
/// `₁F₁(a; b; z) = e^z ₁F₁(b − a; b; −z)` and the sum with less
/// cancellation is returned.
pub fn hyp1f1(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    const NAME: &str = "hyp1f1";
    for v in [a, b, z] {
        ensure_finite(NAME, v)?;
    }
    if is_nonpositive_integer(b) {
        return Err(Error::domain(NAME, format!("b = {b} is a non-positive integer")));
    }
    if z.re >= 0.0 {
        return direct_series(a, b, z).map(|s| s.sum);
    }
    let direct = direct_series(a, b, z);
    let kummer = direct_series(b - a, b, -z);
    let best = match (direct, kummer) {
        (Ok(d), Ok(k)) if d.cancellation() <= k.cancellation() => d.sum,
        (_, Ok(k)) => z.exp() * k.sum,
        (Ok(d), Err(_)) => d.sum,
        (Err(e), Err(_)) => return Err(e),
    };
    ensure_finite(NAME, best)
}

/// Sum of the power series together with its largest term.
struct Series {
    sum: Complex64,
    largest: f64,
}

impl Series {
    /// Ratio of the largest term to the sum, the factor by which rounding
    /// errors in the terms are amplified.
    fn cancellation(&self) -> f64 {
        self.largest / self.sum.norm()
    }
}

fn direct_series(a: Complex64, b: Complex64, z: Complex64) -> Result<Series> {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut largest: f64 = 1.0;
    for k in 0..SERIES_CAP {
        let kf = k as f64;
        let ratio = (a + kf) * z / ((b + kf) * (kf + 1.0));
        term *= ratio;
        sum += term;
        largest = largest.max(term.norm());
        if term.norm() == 0.0 || ratio.norm() < 0.5 && term.norm() < SERIES_EPS * sum.norm() {
            ensure_finite("hyp1f1", sum)?;
            return Ok(Series { sum, largest });
        }
    }
    Err(Error::NonConvergence {
        function: "hyp1f1",
        iterations: SERIES_CAP,
        residual: term.norm(),
    })
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)` on the
/// principal branch, cut along the negative real `z` axis.
///
/// Large arguments use the asymptotic expansion. Otherwise the Laplace
/// integral `Γ(a)·U = ∫₀^∞ e^{−zt} t^{a−1}(1+t)^{b−a−1} dt` is evaluated
/// along the ray on which `zt` is real and positive, with double-exponential
/// quadrature; `Re a ≤ 0` is reached by downward recurrence in `a`.
pub fn kummer_u(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    const NAME: &str = "kummer_u";
    for v in [a, b, z] {
        ensure_finite(NAME, v)?;
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::domain(NAME, "U is singular at z = 0"));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::domain(
            NAME,
            format!("argument {z} lies on the branch cut along the negative real axis"),
        ));
    }
    if z.norm() >= U_ASYMPTOTIC_RADIUS {
        if let Some(v) = u_asymptotic(a, b, z) {
            return ensure_finite(NAME, v);
        }
    }
    if a.re > 0.0 {
        return ensure_finite(NAME, u_integral(a, b, z)?);
    }
    let shift = (1.0 - a.re).ceil().max(1.0) as usize;
    let top = a + shift as f64;
    let mut upper = u_integral(top + 1.0, b, z)?;
    let mut current = u_integral(top, b, z)?;
    let mut ak = top;
    for _ in 0..shift {
        let lower = -(b - 2.0 * ak - z) * current - ak * (ak - b + 1.0) * upper;
        upper = current;
        current = lower;
        ak -= 1.0;
    }
    ensure_finite(NAME, current)
}

fn u_asymptotic(a: Complex64, b: Complex64, z: Complex64) -> Option<Complex64> {
    let c = a - b + 1.0;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..200 {
        let kf = k as f64;
        term *= -(a + kf) * (c + kf) / ((kf + 1.0) * z);
        let size = term.norm();
        if size == 0.0 || size < 1e-16 * sum.norm() {
            sum += term;
            return Some(sum * (-a * z.ln()).exp());
        }
        if size > last {
            return None;
        }
        last = size;
        sum += term;
    }
    None
}

fn u_integral(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    let phi = z.arg();
    let rot = Complex64::from_polar(1.0, -phi);
    let exponent = b - a - 1.0;
    let am1 = a - 1.0;
    let ln_r = r.ln();
    let integrand = |u: f64| -> Complex64 {
        let s = u / r;
        let power = (am1 * (u.ln() - ln_r)).exp();
        let tail = (1.0 + s * rot).powc(exponent);
        (-u).exp() * power * tail / r
    };
    let integral = exp_sinh(integrand)?;
    let prefactor = (-Complex64::new(0.0, phi) * a - ln_gamma(a)).exp();
    Ok(prefactor * integral)
}

/// Double-exponential quadrature of an integrand on `(0, ∞)` that decays
/// exponentially at infinity and is integrable at the origin.
fn exp_sinh(f: impl Fn(f64) -> Complex64) -> Result<Complex64> {
    let trapezoid = |h: f64| -> Complex64 {
        let node = |tau: f64| -> Complex64 {
            let u = (0.5 * PI * tau.sinh()).exp();
            if u == 0.0 || !u.is_finite() {
                return Complex64::new(0.0, 0.0);
            }
            let w = u * 0.5 * PI * tau.cosh();
            let v = f(u) * w;
            if v.re.is_finite() && v.im.is_finite() {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let mut sum = node(0.0);
        for sign in [1.0, -1.0] {
            let mut small = 0;
            let mut k = 1;
            loop {
                let tau = sign * k as f64 * h;
                if tau.abs() > 8.0 {
                    break;
                }
                let v = node(tau);
                sum += v;
                if v.norm() < 1e-18 * sum.norm() {
                    small += 1;
                    if small >= 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
                k += 1;
            }
        }
        sum * h
    };
    let mut h = 0.5;
    let mut previous = trapezoid(h);
    let mut diff = f64::INFINITY;
    for _ in 0..8 {
        h *= 0.5;
        let current = trapezoid(h);
        diff = (current - previous).norm();
        if diff <= 1e-14 * current.norm() {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::NonConvergence {
        function: "kummer_u",
        iterations: 8,
        residual: diff,
    })
}
