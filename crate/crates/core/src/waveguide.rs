//! Transmission-line parameters of parallel-plate and coplanar waveguides.
//!
//! The coplanar line is decomposed into a vacuum upper half-plane and a
//! stack of dielectric layers below the strip, each conformally mapped onto
//! a rectangle. Capacitances are carried in units of ε₀ until the end.

use crate::constants::{C0, EPS0, MU0};
use crate::specfun::{elliptic_k_complement, ASYMPTOTIC_THRESHOLD};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// Cross-section of a guided-wave line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum WaveguideGeometry {
    /// Two plates of width `width` separated by stacked dielectric slabs of
    /// thicknesses `d1` and `d2`.
    ParallelPlate {
        width: f64,
        d1: f64,
        d2: f64,
        eps1_rel: f64,
        eps2_rel: f64,
    },
    /// Center strip of width `w` separated by gaps `s` from the ground
    /// planes, on a substrate of thickness `h1` covered by a layer of
    /// thickness `h2` directly under the metal. Vacuum fills the upper
    /// half-plane and the lower shield sits at infinity.
    Cpw {
        w: f64,
        s: f64,
        h1: f64,
        h2: f64,
        eps1_rel: f64,
        eps2_rel: f64,
    },
    /// Coplanar strip between a vacuum half-plane and a half-plane filled
    /// with a single dielectric.
    CpwTwoHalfPlanes { w: f64, s: f64, eps1_rel: f64 },
}

/// Per-length line parameters in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveguideParams {
    /// Static capacitance per length C′, F/m.
    pub c_line: f64,
    /// Inductance per length L′, H/m.
    pub l_line: f64,
    /// Phase velocity, m/s.
    pub v: f64,
    /// Effective relative permittivity (c₀/v)².
    pub eps_eff: f64,
    /// Dynamic capacitance per length 1/(L′v²), F/m.
    pub c_eff: f64,
    /// Impedance v·L′, Ω.
    pub z: f64,
    /// Static impedance √(L′/C′), Ω.
    pub z_static: f64,
}

impl WaveguideParams {
    fn from_lcv(c_line: f64, l_line: f64, v: f64) -> Self {
        WaveguideParams {
            c_line,
            l_line,
            v,
            eps_eff: (C0 / v).powi(2),
            c_eff: 1.0 / (l_line * v * v),
            z: v * l_line,
            z_static: (l_line / c_line).sqrt(),
        }
    }
}

/// Line parameters for any supported geometry.
pub fn line_params(geom: &WaveguideGeometry) -> Result<WaveguideParams> {
    match *geom {
        WaveguideGeometry::ParallelPlate { .. } => parallel_plate_params(geom),
        WaveguideGeometry::Cpw { .. } | WaveguideGeometry::CpwTwoHalfPlanes { .. } => {
            cpw_params(geom)
        }
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Geometry(format!("{name} must be positive and finite, got {value}")))
    }
}

fn check_permittivity(name: &str, value: f64) -> Result<()> {
    if value >= 1.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Geometry(format!("{name} must be at least 1, got {value}")))
    }
}

/// Parallel plates with two dielectric slabs in series.
pub fn parallel_plate_params(geom: &WaveguideGeometry) -> Result<WaveguideParams> {
    let WaveguideGeometry::ParallelPlate {
        width,
        d1,
        d2,
        eps1_rel,
        eps2_rel,
    } = *geom
    else {
        return Err(Error::Geometry("expected a parallel-plate geometry".into()));
    };
    check_positive("width", width)?;
    check_positive("d1", d1)?;
    check_positive("d2", d2)?;
    check_permittivity("eps1_rel", eps1_rel)?;
    check_permittivity("eps2_rel", eps2_rel)?;
    let (e1, e2) = (eps1_rel * EPS0, eps2_rel * EPS0);
    let series = d1 / e1 + d2 / e2;
    let v = ((d1 / (e1 * e1) + d2 / (e2 * e2)) / (MU0 * series)).sqrt();
    let c_line = width / series;
    let l_line = MU0 * e2 * series / width;
    Ok(WaveguideParams::from_lcv(c_line, l_line, v))
}

fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

fn ln_cosh(x: f64) -> f64 {
    if x > 20.0 {
        x - LN_2 + (-2.0 * x).exp().ln_1p()
    } else {
        x.cosh().ln()
    }
}

/// Mapping modulus `k` of one region together with `ln(1 − k)`, which is
/// kept separately because thin layers push `1 − k` below the smallest
/// representable double.
#[derive(Debug, Clone, Copy)]
struct Modulus {
    k: f64,
    ln_one_minus_k: f64,
}

impl Modulus {
    fn half_plane(w: f64, s: f64) -> Self {
        Modulus {
            k: w / (w + 2.0 * s),
            ln_one_minus_k: (2.0 * s / (w + 2.0 * s)).ln(),
        }
    }

    /// Region of total depth `h` below the strip.
    fn layer(w: f64, s: f64, h: f64) -> Result<Self> {
        let a = PI * w / (2.0 * h);
        let b = PI * (w + 2.0 * s) / (2.0 * h);
        let k = a.tanh() / b.tanh();
        let ln_one_minus_k = ln_sinh(b - a) - ln_cosh(a) - ln_sinh(b);
        if !(k > 0.0 && k <= 1.0) || !(ln_one_minus_k < 0.0) {
            return Err(Error::Geometry(format!(
                "degenerate mapping modulus {k} for layer depth {h}"
            )));
        }
        Ok(Modulus { k, ln_one_minus_k })
    }

    /// `2K(k)/K(k′)` in units of ε₀, with `K` taken in the parameter
    /// convention `K(m) = ∫ dθ/√(1 − m sin²θ)`.
    fn capacitance(self) -> Result<f64> {
        let Modulus { k, ln_one_minus_k } = self;
        let one_minus_k = ln_one_minus_k.exp();
        let numerator = if one_minus_k < ASYMPTOTIC_THRESHOLD {
            2.0 * LN_2 - 0.5 * ln_one_minus_k
        } else {
            elliptic_k_complement(one_minus_k.sqrt())?
        };
        let k_comp = (one_minus_k * (1.0 + k)).sqrt();
        let denominator = elliptic_k_complement((k * k / (1.0 + k_comp)).sqrt())?;
        Ok(2.0 * numerator / denominator)
    }
}

/// Coplanar waveguide parameters from the layered conformal mapping.
pub fn cpw_params(geom: &WaveguideGeometry) -> Result<WaveguideParams> {
    match *geom {
        WaveguideGeometry::Cpw {
            w,
            s,
            h1,
            h2,
            eps1_rel,
            eps2_rel,
        } => {
            for (name, value) in [("w", w), ("s", s), ("h1", h1), ("h2", h2)] {
                check_positive(name, value)?;
            }
            check_permittivity("eps1_rel", eps1_rel)?;
            check_permittivity("eps2_rel", eps2_rel)?;
            let c0 = Modulus::half_plane(w, s).capacitance()?;
            let c1 = Modulus::layer(w, s, h1 + h2)?.capacitance()?;
            let c2 = Modulus::layer(w, s, h2)?.capacitance()?;
            let a = 1.0 / eps1_rel - 1.0;
            let b = 1.0 / eps2_rel - 1.0 / eps1_rel;
            let cd = 1.0 / (1.0 / c0 + a / c1 + b / c2);
            let c = c0 + cd;
            let inverse_eps = 2.0 * c0 / c
                + ((1.0 - c0 / c1) * a * (a / c1 + 2.0 * b / c2) + (1.0 - c0 / c2) * b * b / c2)
                    * cd
                    * cd
                    / c;
            let v = C0 * inverse_eps.sqrt();
            let l_line = MU0 / (c0 + cd / eps2_rel);
            Ok(WaveguideParams::from_lcv(c * EPS0, l_line, v))
        }
        WaveguideGeometry::CpwTwoHalfPlanes { w, s, eps1_rel } => {
            check_positive("w", w)?;
            check_positive("s", s)?;
            check_permittivity("eps1_rel", eps1_rel)?;
            let c0 = Modulus::half_plane(w, s).capacitance()?;
            let c = c0 * (1.0 + eps1_rel);
            let v = C0 * (2.0 * c0 / c).sqrt();
            let l_line = MU0 * eps1_rel / c;
            Ok(WaveguideParams::from_lcv(c * EPS0, l_line, v))
        }
        WaveguideGeometry::ParallelPlate { .. } => {
            Err(Error::Geometry("expected a coplanar geometry".into()))
        }
    }
}

/// Geometry of the reference coplanar line used throughout the examples:
/// `s = 6.6 µm`, `w = 10 µm`, `h₁ = 500 µm`, `h₂ = 550 nm`, ε₁ = 11.6, ε₂ = 3.78.
pub fn reference_cpw() -> WaveguideGeometry {
    WaveguideGeometry::Cpw {
        w: 10e-6,
        s: 6.6e-6,
        h1: 500e-6,
        h2: 550e-9,
        eps1_rel: 11.6,
        eps2_rel: 3.78,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs()
    }

    #[test]
    fn parallel_plate_vacuum_limit() {
        let g = WaveguideGeometry::ParallelPlate {
            width: 1e-3,
            d1: 1e-4,
            d2: 2e-4,
            eps1_rel: 1.0,
            eps2_rel: 1.0,
        };
        let p = parallel_plate_params(&g).unwrap();
        let c_vac = 1.0 / (MU0 * EPS0).sqrt();
        assert!(close(p.v, c_vac, 1e-12));
        assert!(close(p.c_line, EPS0 * 1e-3 / 3e-4, 1e-12));
        assert!(close(p.z, p.z_static, 1e-10));
    }

    #[test]
    fn layer_modulus_complement_is_accurate_for_thin_layers() {
        let m = Modulus::layer(10e-6, 6.6e-6, 550e-9).unwrap();
        assert_eq!(m.k, 1.0);
        assert!(m.ln_one_minus_k < -46.0 && m.ln_one_minus_k.is_finite());
    }

    #[test]
    fn underflowing_layer_modulus_keeps_thin_film_scaling() {
        let c = |h: f64| Modulus::layer(50e-6, 6.6e-6, h).unwrap().capacitance().unwrap();
        let (thin, thinner) = (c(1e-7), c(1e-8));
        assert!(thinner.is_finite());
        assert!(close(thinner / thin, 10.0, 0.01), "{}", thinner / thin);
    }

    #[test]
    fn rejects_bad_geometry() {
        let g = WaveguideGeometry::Cpw {
            w: -1.0,
            s: 1e-6,
            h1: 1e-4,
            h2: 1e-7,
            eps1_rel: 11.6,
            eps2_rel: 3.78,
        };
        assert!(matches!(cpw_params(&g), Err(Error::Geometry(_))));
        let g = WaveguideGeometry::CpwTwoHalfPlanes {
            w: 1e-6,
            s: 1e-6,
            eps1_rel: 0.5,
        };
        assert!(cpw_params(&g).is_err());
    }
}
