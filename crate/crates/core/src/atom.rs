//! Steady-state scattering of one driven two-level atom in an open waveguide.

use crate::constants::HBAR;
use crate::specfun::ComplexScalar;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Drive and decay parameters of a single artificial atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    /// Detuning δω₁ = ω − ω₁ of the drive, rad/s.
    pub delta_omega: f64,
    /// Radiative decay rate Γ₁ into the line, rad/s.
    pub gamma1: f64,
    /// Pure dephasing rate Γ₁,φ, rad/s.
    pub gamma_phi: f64,
    /// Rabi frequency Ω of the drive, rad/s.
    pub rabi: ComplexScalar,
}

impl AtomParams {
    /// Transverse relaxation rate Γ′₁ = Γ₁/2 + Γ₁,φ.
    pub fn gamma_prime(&self) -> f64 {
        0.5 * self.gamma1 + self.gamma_phi
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma1 > 0.0) {
            return Err(Error::Parameter(format!("gamma1 must be positive, got {}", self.gamma1)));
        }
        if !(self.gamma_phi >= 0.0) {
            return Err(Error::Parameter(format!(
                "gamma_phi must be non-negative, got {}",
                self.gamma_phi
            )));
        }
        Ok(())
    }
}

/// Steady-state inversion σᶻ and coherence σ⁻ of the driven atom.
pub fn atom_steady_state(p: &AtomParams) -> Result<(f64, ComplexScalar)> {
    p.validate()?;
    let gp = p.gamma_prime();
    let lorentz = p.delta_omega * p.delta_omega + gp * gp;
    let denominator = lorentz * p.gamma1 + p.rabi.norm_sqr() * gp;
    let sigma_z = -lorentz * p.gamma1 / denominator;
    let sigma_minus =
        -0.5 * Complex64::new(p.delta_omega, -gp) * p.gamma1 * p.rabi.conj() / denominator;
    Ok((sigma_z, sigma_minus))
}

/// Reflection and transmission `(S11, S21)` of the driven atom.
pub fn atom_s_params(p: &AtomParams) -> Result<(ComplexScalar, ComplexScalar)> {
    p.validate()?;
    let gp = p.gamma_prime();
    let ratio = p.delta_omega / gp;
    let s11 = -(p.gamma1 / (2.0 * gp)) * Complex64::new(1.0, ratio)
        / (1.0 + ratio * ratio + p.rabi.norm_sqr() / (p.gamma1 * gp));
    Ok((s11, 1.0 + s11))
}

/// Radiative rate implied by a drive of Rabi frequency `rabi_abs` at
/// frequency `omega1` carried by a line power `power`: Γ₁ = |Ω|²ħω₁/(2P).
pub fn gamma1_from_power(rabi_abs: f64, omega1: f64, power: f64) -> f64 {
    rabi_abs * rabi_abs * HBAR * omega1 / (2.0 * power)
}
