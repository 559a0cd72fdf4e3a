//! Bare two-gap resonator: complex poles, quality factors and S-parameters.
//!
//! A line section of length `L` terminated by two series gap capacitances
//! `C` has poles at the roots of `(1 − 2iωC/cC′)² = e^{2iLω/c}`. With
//! `x = C′L/2C` these are `ω = (c/L)·i·(W_k(±x·eˣ) − x)` for the Lambert
//! branches `k = −⌈n/2⌉`, the sign of the argument alternating with `n`.

use crate::specfun::{lambert_w_exp, ComplexScalar};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Above this value of `C′L/2C` the pole offset `W − x` is refined on the
/// logarithmic equation directly, since forming `W − x` would cancel.
const OFFSET_POLISH_THRESHOLD: f64 = 30.0;

/// Resonator section between two coupling gaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorGeometry {
    /// Section length L, m.
    pub length: f64,
    /// Gap capacitance C at each end, F.
    pub gap_capacitance: f64,
    /// Line capacitance per length C′, F/m.
    pub line_capacitance: f64,
    /// Phase velocity c on the line, m/s.
    pub velocity: f64,
}

impl ResonatorGeometry {
    /// Geometry with the gap capacitance given as the ratio `C/(C′L)`.
    pub fn from_ratio(length: f64, line_capacitance: f64, velocity: f64, ratio: f64) -> Self {
        ResonatorGeometry {
            length,
            gap_capacitance: ratio * line_capacitance * length,
            line_capacitance,
            velocity,
        }
    }

    /// The dimensionless ratio `C/(C′L)`.
    pub fn ratio(&self) -> f64 {
        self.gap_capacitance / (self.line_capacitance * self.length)
    }

    /// Unperturbed harmonic `nπc/L`.
    pub fn bare_harmonic(&self, n: u32) -> f64 {
        n as f64 * PI * self.velocity / self.length
    }

    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("length", self.length),
            ("gap_capacitance", self.gap_capacitance),
            ("line_capacitance", self.line_capacitance),
            ("velocity", self.velocity),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Parameter(format!(
                    "resonator {name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// One resonance of the bare cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityMode {
    pub n: u32,
    /// Resonance frequency ωₙ, rad/s.
    pub omega: f64,
    /// Full damping rate γₙ, rad/s.
    pub gamma: f64,
    /// ωₙ/γₙ.
    pub q_factor: f64,
}

/// Modes `n = 1..=n_max` from the exact Lambert-W pole condition.
pub fn resonances(geom: &ResonatorGeometry, n_max: u32) -> Result<Vec<CavityMode>> {
    geom.validate()?;
    if n_max == 0 {
        return Err(Error::Parameter("n_max must be at least 1".into()));
    }
    let x = geom.line_capacitance * geom.length / (2.0 * geom.gap_capacitance);
    let scale = geom.velocity / geom.length;
    (1..=n_max)
        .map(|n| {
            let offset = pole_offset(x, n)?;
            let pole = Complex64::i() * offset * scale;
            let omega = pole.re;
            let gamma = -2.0 * pole.im;
            if !(gamma > 0.0) {
                return Err(Error::Domain {
                    function: "resonances",
                    detail: format!("mode {n} has non-decaying pole {pole}"),
                });
            }
            Ok(CavityMode {
                n,
                omega,
                gamma,
                q_factor: omega / gamma,
            })
        })
        .collect()
}

/// `d = W_k(±x·eˣ) − x` for mode `n`, which satisfies
/// `d + ln(1 + d/x) = iπ·[n odd] + 2πik`.
fn pole_offset(x: f64, n: u32) -> Result<Complex64> {
    let odd = n % 2 == 1;
    let branch = -(n.div_ceil(2) as i64);
    let phase = if odd { PI } else { 0.0 };
    let target = Complex64::new(0.0, phase + 2.0 * PI * branch as f64);
    if x <= OFFSET_POLISH_THRESHOLD {
        let w = lambert_w_exp(branch, Complex64::new(x.ln() + x, phase))?;
        return Ok(w - x);
    }
    let mut d = target;
    for _ in 0..100 {
        let g = d + (d / x).ln_1p_complex() - target;
        let step = g / (1.0 + 1.0 / (x + d));
        d -= step;
        if step.norm() <= 4.0 * f64::EPSILON * d.norm() {
            return Ok(d);
        }
    }
    Err(Error::NonConvergence {
        function: "resonances",
        iterations: 100,
        residual: (d + (d / x).ln_1p_complex() - target).norm(),
    })
}

trait Ln1p {
    fn ln_1p_complex(self) -> Self;
}

impl Ln1p for Complex64 {
    /// `ln(1 + z)` without the cancellation of forming `1 + z` for small `z`.
    fn ln_1p_complex(self) -> Self {
        if self.norm() > 0.5 {
            return (1.0 + self).ln();
        }
        let re = 0.5 * (self.re * (2.0 + self.re) + self.im * self.im).ln_1p();
        let im = self.im.atan2(1.0 + self.re);
        Complex64::new(re, im)
    }
}

/// Lossless transmission and reflection `(S21, S11)` of the bare cavity.
pub fn bare_s_params(geom: &ResonatorGeometry, omega: f64) -> (ComplexScalar, ComplexScalar) {
    let a = 2.0 * omega * geom.gap_capacitance / (geom.velocity * geom.line_capacitance);
    let theta = geom.length * omega / geom.velocity;
    let denominator = s_denominator(a, theta);
    let ia = Complex64::new(0.0, a);
    let s21 = ia * ia / denominator;
    let s11 = Complex64::new(0.0, 2.0 * (a * theta.cos() + theta.sin())) / denominator;
    (s21, s11)
}

/// `|(1 − ia)² − e^{2iθ}|` at frequency `omega`, which vanishes at the poles.
pub fn s_denominator_norm(geom: &ResonatorGeometry, omega: f64) -> f64 {
    let a = 2.0 * omega * geom.gap_capacitance / (geom.velocity * geom.line_capacitance);
    let theta = geom.length * omega / geom.velocity;
    s_denominator(a, theta).norm()
}

fn s_denominator(a: f64, theta: f64) -> Complex64 {
    let one_minus_ia = Complex64::new(1.0, -a);
    one_minus_ia * one_minus_ia - Complex64::from_polar(1.0, 2.0 * theta)
}

/// Leading-order small-gap estimates `(ωₙ, γₙ)`:
/// `ωₙ ≈ ωₙ₀(1 − 2C/C′L)` and `γₙ ≈ (4c/L)(Cωₙ₀/cC′)²`.
pub fn small_gap_estimate(geom: &ResonatorGeometry, n: u32) -> (f64, f64) {
    let w0 = geom.bare_harmonic(n);
    let r = geom.ratio();
    let gamma = 4.0 * geom.velocity / geom.length
        * (geom.gap_capacitance * w0 / (geom.velocity * geom.line_capacitance)).powi(2);
    (w0 * (1.0 - 2.0 * r), gamma)
}
