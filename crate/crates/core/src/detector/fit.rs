//! Extraction of an isolated complex pole from sampled response data.

use crate::specfun::ComplexScalar;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

/// Samples per fit window.
const FIT_POINTS: usize = 401;
/// Half-width of the fit window in units of the current width estimate.
const FIT_HALF_SPAN: f64 = 3.0;
/// Number of reweighting passes.
const FIT_PASSES: usize = 4;

/// Pole `ω₀ − iΓ` and residue of a local Lorentzian component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleFit {
    pub pole: ComplexScalar,
    pub residue: ComplexScalar,
}

impl PoleFit {
    /// Peak position `Re(pole)`.
    pub fn position(&self) -> f64 {
        self.pole.re
    }

    /// Half-width `−Im(pole)`.
    pub fn half_width(&self) -> f64 {
        -self.pole.im
    }
}

/// Fits `f(x) ≈ residue/(x − pole) + b(x)` with a linear background `b`
/// near `center`, starting from the half-width guess `width`.
///
/// Multiplying through by `x − pole` makes the model linear in its
/// unknowns; each pass solves the weighted least-squares problem with
/// weights `1/|x − pole|` from the previous pass, which undoes the
/// emphasis the multiplication puts on the wings.
pub fn fit_pole(
    f: impl Fn(f64) -> Result<ComplexScalar> + Sync,
    center: f64,
    width: f64,
) -> Result<PoleFit> {
    if !(width > 0.0) {
        return Err(Error::Parameter(format!("fit width must be positive, got {width}")));
    }
    let mut pole = Complex64::new(center, -width);
    let mut residue = Complex64::new(0.0, 0.0);
    for _ in 0..FIT_PASSES {
        let scale = -pole.im;
        if !(scale > 0.0) {
            return Err(Error::Domain {
                function: "fit_pole",
                detail: format!("fitted pole {pole} is not in the lower half plane"),
            });
        }
        let mid = pole.re;
        let u: Vec<f64> = (0..FIT_POINTS)
            .map(|i| FIT_HALF_SPAN * (2.0 * i as f64 / (FIT_POINTS - 1) as f64 - 1.0))
            .collect();
        let values = u
            .par_iter()
            .map(|&ui| f(mid + ui * scale))
            .collect::<Result<Vec<_>>>()?;
        let reduced_pole = (pole - mid) / scale;
        let mut a = DMatrix::<Complex64>::zeros(FIT_POINTS, 4);
        let mut b = DVector::<Complex64>::zeros(FIT_POINTS);
        for (row, (&ui, &r)) in u.iter().zip(&values).enumerate() {
            let weight = 1.0 / (ui - reduced_pole).norm();
            let one = Complex64::new(weight, 0.0);
            a[(row, 0)] = one;
            a[(row, 1)] = r * weight;
            a[(row, 2)] = one * ui;
            a[(row, 3)] = one * ui * ui;
            b[row] = r * ui * weight;
        }
        let x = a
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::Singular(format!("pole fit: {e}")))?;
        let p = x[1];
        pole = mid + p * scale;
        residue = (x[0] + x[2] * p + x[3] * p * p) * scale;
    }
    Ok(PoleFit { pole, residue })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_lorentzian_with_background() {
        let pole = Complex64::new(5.0, -0.3);
        let residue = Complex64::new(0.7, -0.2);
        let f = |x: f64| Ok(residue / (x - pole) + Complex64::new(0.1 + 0.01 * x, -0.05));
        let fit = fit_pole(f, 5.2, 0.5).unwrap();
        assert!((fit.pole - pole).norm() < 1e-10, "{:?}", fit);
        assert!((fit.residue - residue).norm() < 1e-10);
    }
}
